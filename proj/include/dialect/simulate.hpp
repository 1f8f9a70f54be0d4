#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dialect/classify.hpp"
#include "dialect/corpus.hpp"
#include "dialect/model.hpp"

namespace dialect {

/// Draws each file's pattern by independent Bernoulli trials per message.
/// File i uses the stream derive_key(seed, stream, i), so files can be drawn
/// in any order or in parallel. Ids are `<prefix><i>`.
Corpus generate_corpus(const DialectModel& model, std::size_t num_files, std::uint64_t seed,
                       std::optional<std::string> label = std::nullopt, const std::string& id_prefix = "f",
                       std::uint64_t stream = 0);

struct MixtureComponent {
    const DialectModel* model;
    std::size_t count;
    std::string label;
    std::string id_prefix;
};

/// Labelled union of the components (component c drawn on stream c),
/// shuffled deterministically from the seed.
Corpus generate_mixture(std::span<const MixtureComponent> components, std::uint64_t seed);

/// Two-dialect mixture labelled "A" and "B".
Corpus generate_mixture(const TwoDialectConfig& config, std::size_t num_a, std::size_t num_b, std::uint64_t seed);

/// Fisher-Yates with the counter generator.
Corpus shuffle(const Corpus& corpus, std::uint64_t seed);

enum class Alignment {
    Rank,     // i-th largest trial weight against i-th largest expected
    Pattern,  // each pattern's trial weight, patterns ordered by expected rank
};

struct EnvelopeRow {
    std::size_t rank = 0;  // 1-based
    double expected = 0;
    double min = 0;
    double mean = 0;
    double max = 0;
};

struct Replication {
    Alignment alignment = Alignment::Rank;
    std::vector<double> expected;
    std::vector<EnvelopeRow> envelope;
};

/// Builds `trials` corpora of num_files files and aggregates their Dowker
/// histograms against the expected one. Trial t uses seed derive_key(seed, t);
/// results do not depend on `workers`. Pattern alignment enumerates all 2^#M
/// patterns when #M <= 20 and otherwise the union of observed ones.
Replication replicate_histogram(const DialectModel& model, std::size_t num_files, std::size_t trials,
                                std::uint64_t seed, Alignment alignment = Alignment::Rank, unsigned workers = 1);

/// `rank,expected,min,mean,max`
void write_envelope_csv(const Replication& replication, std::ostream& out);

}  // namespace dialect
