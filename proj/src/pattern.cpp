#include "dialect/pattern.hpp"

#include <algorithm>
#include <iterator>

#include "dialect/error.hpp"

namespace dialect {

namespace {

void canonicalize(std::vector<MessageId>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

MessagePattern::MessagePattern(std::initializer_list<MessageId> ids) : members_(ids) { canonicalize(members_); }

MessagePattern::MessagePattern(std::vector<MessageId> ids) : members_(std::move(ids)) { canonicalize(members_); }

bool MessagePattern::contains(MessageId id) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), id);
}

MessageId MessagePattern::min_universe() const noexcept { return members_.empty() ? 0 : members_.back() + 1; }

MessagePattern MessagePattern::with(MessageId id) const {
    MessagePattern out;
    out.members_.reserve(members_.size() + 1);
    auto pos = std::lower_bound(members_.begin(), members_.end(), id);
    out.members_.assign(members_.begin(), pos);
    out.members_.push_back(id);
    out.members_.insert(out.members_.end(), pos == members_.end() || *pos != id ? pos : pos + 1, members_.end());
    return out;
}

MessagePattern MessagePattern::without(MessageId id) const {
    MessagePattern out;
    out.members_.reserve(members_.size());
    std::copy_if(members_.begin(), members_.end(), std::back_inserter(out.members_),
                 [id](MessageId m) { return m != id; });
    return out;
}

MessagePattern MessagePattern::toggled(std::span<const MessageId> ids) const {
    MessagePattern out;
    std::set_symmetric_difference(members_.begin(), members_.end(), ids.begin(), ids.end(),
                                  std::back_inserter(out.members_));
    return out;
}

bool MessagePattern::is_subset_of(const MessagePattern& other) const noexcept {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

std::string MessagePattern::to_hex(std::size_t num_messages) const {
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t bytes = (num_messages + 7) / 8;
    std::string packed(bytes, '\0');
    for (MessageId m : members_) {
        if (m >= num_messages) throw Error("message " + std::to_string(m) + " outside pattern width");
        packed[m / 8] = static_cast<char>(static_cast<unsigned char>(packed[m / 8]) | (0x80u >> (m % 8)));
    }
    std::string hex;
    hex.reserve(2 * bytes);
    for (char c : packed) {
        const auto b = static_cast<unsigned char>(c);
        hex.push_back(digits[b >> 4]);
        hex.push_back(digits[b & 0xf]);
    }
    return hex;
}

MessagePattern MessagePattern::from_hex(std::string_view hex) {
    MessagePattern out;
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const int d = hex_digit(hex[i]);
        if (d < 0) throw Error("invalid hex digit in pattern '" + std::string(hex) + "'");
        for (int bit = 0; bit < 4; ++bit) {
            if (d & (0x8 >> bit)) out.members_.push_back(static_cast<MessageId>(4 * i + bit));
        }
    }
    return out;
}

std::size_t MessagePattern::hash() const noexcept {
    // FNV-1a over the little-endian bytes of the sorted members.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (MessageId m : members_) {
        for (int s = 0; s < 32; s += 8) {
            h ^= (m >> s) & 0xffu;
            h *= 0x100000001b3ULL;
        }
    }
    h ^= members_.size();
    return static_cast<std::size_t>(h * 0x100000001b3ULL);
}

std::strong_ordering operator<=>(const MessagePattern& a, const MessagePattern& b) noexcept {
    return std::lexicographical_compare_three_way(a.members_.begin(), a.members_.end(), b.members_.begin(),
                                                  b.members_.end());
}

bool CanonicalLess::operator()(const MessagePattern& a, const MessagePattern& b) const noexcept {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace dialect
