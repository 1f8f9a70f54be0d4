#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dialect/pattern.hpp"

namespace dialect {

struct MessageMeta {
    MessageId id = 0;
    std::string parser;
    std::string options;
    std::string regex;  // empty for exit-code messages
    bool inverted = false;

    friend bool operator==(const MessageMeta&, const MessageMeta&) = default;
};

struct FileRecord {
    std::string id;
    MessagePattern pattern;
    std::optional<std::string> label;

    friend bool operator==(const FileRecord&, const FileRecord&) = default;
};

/// File x message incidence, one pattern per file, plus per-message metadata.
class Corpus {
public:
    explicit Corpus(std::size_t num_messages = 0);

    std::size_t num_messages() const noexcept { return num_messages_; }
    std::size_t size() const noexcept { return files_.size(); }
    bool empty() const noexcept { return files_.empty(); }

    const std::vector<FileRecord>& files() const noexcept { return files_; }
    const FileRecord& file(std::size_t i) const { return files_.at(i); }
    std::optional<std::size_t> find(const std::string& file_id) const;

    const std::vector<MessageMeta>& meta() const noexcept { return meta_; }
    const MessageMeta& meta(MessageId id) const { return meta_.at(id); }
    void set_meta(MessageMeta meta);

    /// Appends a file. Throws on a duplicate id or an out-of-range message.
    void add(FileRecord record);
    void set_label(std::size_t index, std::optional<std::string> label);

    bool has_labels() const noexcept;
    /// Distinct labels in sorted order.
    std::vector<std::string> labels() const;
    /// Sum of pattern cardinalities.
    std::size_t total_pairs() const noexcept;

    friend bool operator==(const Corpus& a, const Corpus& b) {
        return a.num_messages_ == b.num_messages_ && a.files_ == b.files_ && a.meta_ == b.meta_;
    }

private:
    std::size_t num_messages_;
    std::vector<FileRecord> files_;
    std::vector<MessageMeta> meta_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Input formats:
//   pairs CSV   `file_id,message_id`, no header
//   dense CSV   header `file_id,m0,m1,...`, one row of 0/1 cells per file
//   labels CSV  `file_id,label`
//   meta TSV    `id<TAB>parser<TAB>options<TAB>regex`

Corpus load_pairs(const std::filesystem::path& path, std::size_t num_messages,
                  const std::optional<std::filesystem::path>& labels = std::nullopt);
Corpus read_pairs(std::istream& in, std::size_t num_messages, const std::string& source = "<pairs>");

Corpus load_dense(const std::filesystem::path& path);
Corpus read_dense(std::istream& in, const std::string& source = "<dense>");
void write_dense(const Corpus& corpus, std::ostream& out);

std::vector<std::pair<std::string, std::string>> read_labels(std::istream& in,
                                                             const std::string& source = "<labels>");
/// Attaches labels; ids absent from the corpus are added with the empty pattern.
void apply_labels(Corpus& corpus, const std::vector<std::pair<std::string, std::string>>& labels);
void load_labels_into(Corpus& corpus, const std::filesystem::path& path);
void write_labels(const Corpus& corpus, std::ostream& out);

std::vector<MessageMeta> read_message_meta(std::istream& in, const std::string& source = "<meta>");
void load_message_meta_into(Corpus& corpus, const std::filesystem::path& path);
void write_message_meta(const Corpus& corpus, std::ostream& out);

/// A normalized corpus directory: corpus.csv, plus labels.csv and messages.tsv
/// when the corpus carries labels or metadata.
void save_archive(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_archive(const std::filesystem::path& dir);
/// Archive directory or a bare dense CSV.
Corpus load_corpus(const std::filesystem::path& path);

/// Fraction of files exhibiting each message. Throws on an empty corpus.
std::vector<double> message_frequencies(const Corpus& corpus);

struct InversionResult {
    Corpus corpus;
    std::vector<MessageId> mask;  // sorted
};

/// Complements every message whose frequency is strictly above `cutoff`.
InversionResult invert_frequent_messages(const Corpus& corpus, double cutoff = 0.5);

/// Complements membership of the given messages in every file and toggles
/// their `inverted` flag. Applying the same mask twice restores the input.
Corpus apply_inversion(const Corpus& corpus, std::span<const MessageId> mask);

/// Concatenation; file ids must be disjoint and message counts equal.
Corpus concat(const Corpus& a, const Corpus& b);

}  // namespace dialect
