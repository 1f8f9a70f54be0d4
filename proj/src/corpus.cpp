#include "dialect/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "dialect/error.hpp"

namespace dialect {

namespace fs = std::filesystem;
using detail::LineReader;
using detail::parse_number;
using detail::split;
using detail::trim;

namespace {

std::vector<MessageMeta> default_meta(std::size_t n) {
    std::vector<MessageMeta> meta(n);
    for (std::size_t i = 0; i < n; ++i) meta[i].id = static_cast<MessageId>(i);
    return meta;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace

Corpus::Corpus(std::size_t num_messages) : num_messages_(num_messages), meta_(default_meta(num_messages)) {}

std::optional<std::size_t> Corpus::find(const std::string& file_id) const {
    auto it = index_.find(file_id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Corpus::set_meta(MessageMeta meta) {
    if (meta.id >= num_messages_) throw Error("metadata for message " + std::to_string(meta.id) + " outside corpus");
    meta_[meta.id] = std::move(meta);
}

void Corpus::add(FileRecord record) {
    if (record.pattern.min_universe() > num_messages_) {
        throw Error("file '" + record.id + "' has message " + std::to_string(record.pattern.min_universe() - 1) +
                    " >= " + std::to_string(num_messages_));
    }
    auto [it, inserted] = index_.emplace(record.id, files_.size());
    if (!inserted) throw Error("duplicate file id '" + record.id + "'");
    files_.push_back(std::move(record));
}

void Corpus::set_label(std::size_t index, std::optional<std::string> label) { files_.at(index).label = std::move(label); }

bool Corpus::has_labels() const noexcept {
    return std::any_of(files_.begin(), files_.end(), [](const FileRecord& f) { return f.label.has_value(); });
}

std::vector<std::string> Corpus::labels() const {
    std::set<std::string> s;
    for (const auto& f : files_)
        if (f.label) s.insert(*f.label);
    return {s.begin(), s.end()};
}

std::size_t Corpus::total_pairs() const noexcept {
    std::size_t n = 0;
    for (const auto& f : files_) n += f.pattern.size();
    return n;
}

Corpus read_pairs(std::istream& in, std::size_t num_messages, const std::string& source) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<MessageId>> members;
    LineReader reader(in);
    std::string line;
    while (reader.next(line)) {
        if (detail::blank(line)) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 2) throw ParseError(source, reader.line_no(), "expected 'file_id,message_id'");
        const std::string file_id(trim(cells[0]));
        if (file_id.empty()) throw ParseError(source, reader.line_no(), "empty file id");
        auto [it, inserted] = members.try_emplace(file_id);
        if (inserted) order.push_back(file_id);
        if (trim(cells[1]).empty()) continue;  // file with no messages
        const auto msg = parse_number<std::uint64_t>(cells[1]);
        if (!msg) throw ParseError(source, reader.line_no(), "message id '" + std::string(trim(cells[1])) + "' is not a non-negative integer");
        if (*msg >= num_messages) {
            throw ParseError(source, reader.line_no(),
                             "message id " + std::to_string(*msg) + " out of range (#M = " + std::to_string(num_messages) + ")");
        }
        it->second.push_back(static_cast<MessageId>(*msg));
    }
    Corpus corpus(num_messages);
    for (auto& id : order) corpus.add({id, MessagePattern(std::move(members[id])), std::nullopt});
    return corpus;
}

Corpus load_pairs(const fs::path& path, std::size_t num_messages, const std::optional<fs::path>& labels) {
    auto in = open_input(path);
    Corpus corpus = read_pairs(in, num_messages, path.string());
    if (labels) load_labels_into(corpus, *labels);
    return corpus;
}

Corpus read_dense(std::istream& in, const std::string& source) {
    LineReader reader(in);
    std::string line;
    do {
        if (!reader.next(line)) throw ParseError(source, reader.line_no(), "missing header");
    } while (detail::blank(line));
    const auto header = split(line, ',');
    if (trim(header[0]) != "file_id") throw ParseError(source, reader.line_no(), "header must start with 'file_id'");
    const std::size_t num_messages = header.size() - 1;
    Corpus corpus(num_messages);
    std::vector<MessageId> members;
    while (reader.next(line)) {
        if (detail::blank(line)) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            throw ParseError(source, reader.line_no(),
                             "expected " + std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
        }
        members.clear();
        for (std::size_t k = 0; k < num_messages; ++k) {
            const auto cell = trim(cells[k + 1]);
            if (cell == "1") {
                members.push_back(static_cast<MessageId>(k));
            } else if (cell != "0") {
                throw ParseError(source, reader.line_no(), "non-binary cell '" + std::string(cell) + "' in column " + std::to_string(k + 1));
            }
        }
        try {
            corpus.add({std::string(trim(cells[0])), MessagePattern(members), std::nullopt});
        } catch (const Error& e) {
            throw ParseError(source, reader.line_no(), e.what());
        }
    }
    return corpus;
}

Corpus load_dense(const fs::path& path) {
    auto in = open_input(path);
    return read_dense(in, path.string());
}

void write_dense(const Corpus& corpus, std::ostream& out) {
    out << "file_id";
    for (std::size_t k = 0; k < corpus.num_messages(); ++k) out << ",m" << k;
    out << '\n';
    std::string row;
    for (const auto& f : corpus.files()) {
        row.assign(2 * corpus.num_messages(), '0');
        for (std::size_t k = 0; k < corpus.num_messages(); ++k) row[2 * k] = ',';
        for (MessageId m : f.pattern.members()) row[2 * m + 1] = '1';
        out << f.id << row << '\n';
    }
}

std::vector<std::pair<std::string, std::string>> read_labels(std::istream& in, const std::string& source) {
    std::vector<std::pair<std::string, std::string>> out;
    LineReader reader(in);
    std::string line;
    while (reader.next(line)) {
        if (detail::blank(line)) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 2) throw ParseError(source, reader.line_no(), "expected 'file_id,label'");
        std::string id(trim(cells[0]));
        if (id.empty()) throw ParseError(source, reader.line_no(), "empty file id");
        out.emplace_back(std::move(id), std::string(trim(cells[1])));
    }
    return out;
}

void apply_labels(Corpus& corpus, const std::vector<std::pair<std::string, std::string>>& labels) {
    for (const auto& [id, label] : labels) {
        if (auto pos = corpus.find(id)) {
            corpus.set_label(*pos, label);
        } else {
            corpus.add({id, MessagePattern{}, label});
        }
    }
}

void load_labels_into(Corpus& corpus, const fs::path& path) {
    auto in = open_input(path);
    apply_labels(corpus, read_labels(in, path.string()));
}

void write_labels(const Corpus& corpus, std::ostream& out) {
    for (const auto& f : corpus.files())
        if (f.label) out << f.id << ',' << *f.label << '\n';
}

std::vector<MessageMeta> read_message_meta(std::istream& in, const std::string& source) {
    std::vector<MessageMeta> out;
    LineReader reader(in);
    std::string line;
    while (reader.next(line)) {
        if (detail::blank(line)) continue;
        const auto cells = split(line, '\t');
        if (cells.size() < 3 || cells.size() > 4) {
            throw ParseError(source, reader.line_no(), "expected 'id<TAB>parser<TAB>options<TAB>regex'");
        }
        const auto id = parse_number<MessageId>(cells[0]);
        if (!id) throw ParseError(source, reader.line_no(), "bad message id");
        MessageMeta m;
        m.id = *id;
        m.parser = std::string(cells[1]);
        m.options = std::string(cells[2]);
        if (cells.size() == 4) m.regex = std::string(cells[3]);
        out.push_back(std::move(m));
    }
    return out;
}

void load_message_meta_into(Corpus& corpus, const fs::path& path) {
    auto in = open_input(path);
    for (auto& m : read_message_meta(in, path.string())) {
        if (m.id >= corpus.num_messages()) {
            throw Error(path.string() + ": metadata for message " + std::to_string(m.id) + " outside corpus (#M = " +
                        std::to_string(corpus.num_messages()) + ")");
        }
        corpus.set_meta(std::move(m));
    }
}

void write_message_meta(const Corpus& corpus, std::ostream& out) {
    for (const auto& m : corpus.meta()) out << m.id << '\t' << m.parser << '\t' << m.options << '\t' << m.regex << '\n';
}

namespace {

bool has_meta(const Corpus& corpus) {
    return std::any_of(corpus.meta().begin(), corpus.meta().end(), [](const MessageMeta& m) {
        return !m.parser.empty() || !m.options.empty() || !m.regex.empty();
    });
}

}  // namespace

void save_archive(const Corpus& corpus, const fs::path& dir) {
    fs::create_directories(dir);
    {
        auto out = open_output(dir / "corpus.csv");
        write_dense(corpus, out);
    }
    fs::remove(dir / "labels.csv");
    fs::remove(dir / "messages.tsv");
    if (corpus.has_labels()) {
        auto out = open_output(dir / "labels.csv");
        write_labels(corpus, out);
    }
    if (has_meta(corpus)) {
        auto out = open_output(dir / "messages.tsv");
        write_message_meta(corpus, out);
    }
}

Corpus load_archive(const fs::path& dir) {
    Corpus corpus = load_dense(dir / "corpus.csv");
    if (fs::exists(dir / "labels.csv")) load_labels_into(corpus, dir / "labels.csv");
    if (fs::exists(dir / "messages.tsv")) load_message_meta_into(corpus, dir / "messages.tsv");
    return corpus;
}

Corpus load_corpus(const fs::path& path) {
    if (fs::is_directory(path)) return load_archive(path);
    return load_dense(path);
}

std::vector<double> message_frequencies(const Corpus& corpus) {
    if (corpus.empty()) throw Error("message frequencies of an empty corpus");
    std::vector<std::size_t> counts(corpus.num_messages(), 0);
    for (const auto& f : corpus.files())
        for (MessageId m : f.pattern.members()) ++counts[m];
    std::vector<double> freq(counts.size());
    const auto n = static_cast<double>(corpus.size());
    for (std::size_t k = 0; k < counts.size(); ++k) freq[k] = static_cast<double>(counts[k]) / n;
    return freq;
}

Corpus apply_inversion(const Corpus& corpus, std::span<const MessageId> mask) {
    std::vector<MessageId> sorted(mask.begin(), mask.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (!sorted.empty() && sorted.back() >= corpus.num_messages()) throw Error("inversion mask outside corpus");

    Corpus out(corpus.num_messages());
    for (auto m : corpus.meta()) {
        if (std::binary_search(sorted.begin(), sorted.end(), m.id)) m.inverted = !m.inverted;
        out.set_meta(std::move(m));
    }
    for (const auto& f : corpus.files()) out.add({f.id, f.pattern.toggled(sorted), f.label});
    return out;
}

InversionResult invert_frequent_messages(const Corpus& corpus, double cutoff) {
    std::vector<MessageId> mask;
    if (!corpus.empty()) {
        const auto freq = message_frequencies(corpus);
        for (std::size_t k = 0; k < freq.size(); ++k)
            if (freq[k] > cutoff) mask.push_back(static_cast<MessageId>(k));
    }
    return {apply_inversion(corpus, mask), mask};
}

Corpus concat(const Corpus& a, const Corpus& b) {
    if (a.num_messages() != b.num_messages()) throw Error("cannot concatenate corpora with different message counts");
    Corpus out(a.num_messages());
    for (const auto& m : a.meta()) out.set_meta(m);
    for (const auto& f : a.files()) out.add(f);
    for (const auto& f : b.files()) out.add(f);
    return out;
}

}  // namespace dialect
