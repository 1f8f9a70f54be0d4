#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dialect {

using MessageId = std::uint32_t;

/// The exact set of messages a file exhibits (a Dowker simplex).
///
/// Members are kept sorted and unique, so two patterns holding the same set
/// compare equal and hash identically regardless of construction order.
class MessagePattern {
public:
    MessagePattern() = default;
    MessagePattern(std::initializer_list<MessageId> ids);
    explicit MessagePattern(std::vector<MessageId> ids);

    std::span<const MessageId> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(MessageId id) const noexcept;

    /// Largest member + 1, or 0 for the empty pattern.
    MessageId min_universe() const noexcept;

    MessagePattern with(MessageId id) const;
    MessagePattern without(MessageId id) const;

    /// Symmetric difference with a sorted, unique id list.
    MessagePattern toggled(std::span<const MessageId> ids) const;

    bool is_subset_of(const MessagePattern& other) const noexcept;

    /// Packed membership bits, ceil(num_messages/8) bytes, message 8j+b
    /// stored at bit (7-b) of byte j, rendered as lowercase hex.
    std::string to_hex(std::size_t num_messages) const;
    static MessagePattern from_hex(std::string_view hex);

    std::size_t hash() const noexcept;

    friend bool operator==(const MessagePattern&, const MessagePattern&) = default;
    friend std::strong_ordering operator<=>(const MessagePattern& a, const MessagePattern& b) noexcept;

private:
    std::vector<MessageId> members_;
};

struct PatternHash {
    std::size_t operator()(const MessagePattern& p) const noexcept { return p.hash(); }
};

/// Canonical display order: by message count, then lexicographic on members.
struct CanonicalLess {
    bool operator()(const MessagePattern& a, const MessagePattern& b) const noexcept;
};

}  // namespace dialect
