#ifndef TAGFOLK_IDS_HPP
#define TAGFOLK_IDS_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tagfolk {

/// Dense interned identifier. The tag type only keeps user, resource and
/// tag ids from being mixed up; all of them index into an Interner.
template <typename Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const Id&) const = default;
  constexpr std::size_t index() const { return value; }
};

struct UserTag {};
struct ResourceTag {};
struct TagTag {};

using UserId = Id<UserTag>;
using ResourceId = Id<ResourceTag>;
using TagId = Id<TagTag>;

/// Bidirectional string <-> id map. Ids are assigned in first-seen order and
/// never change for the lifetime of the interner.
template <typename IdType>
class Interner {
 public:
  IdType intern(std::string_view s) {
    if (auto it = lookup_.find(std::string(s)); it != lookup_.end()) return it->second;
    IdType id{static_cast<std::uint32_t>(names_.size())};
    names_.emplace_back(s);
    lookup_.emplace(names_.back(), id);
    return id;
  }

  std::optional<IdType> find(std::string_view s) const {
    if (auto it = lookup_.find(std::string(s)); it != lookup_.end()) return it->second;
    return std::nullopt;
  }

  const std::string& name(IdType id) const { return names_.at(id.index()); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, IdType> lookup_;
};

}  // namespace tagfolk

template <typename Tag>
struct std::hash<tagfolk::Id<Tag>> {
  std::size_t operator()(tagfolk::Id<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

#endif  // TAGFOLK_IDS_HPP
