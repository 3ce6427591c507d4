#ifndef TAGFOLK_FOLKSONOMY_HPP
#define TAGFOLK_FOLKSONOMY_HPP

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tagfolk/ids.hpp"

namespace tagfolk {

using Count = std::uint64_t;

/// Tag -> number of bookmarks (of one resource or one user) carrying it.
using TagCounts = std::map<TagId, Count>;

/// One annotation event. `tags` is sorted by id and duplicate free; `seq` is
/// the position of the bookmark in its resource's bookmark list.
struct Bookmark {
  UserId user;
  ResourceId resource;
  std::vector<TagId> tags;
  Count seq = 0;
};

/// Distinct-resource, distinct-user and bookmark counts of one tag.
struct Frequencies {
  Count rf = 0;
  Count uf = 0;
  Count bf = 0;

  bool operator==(const Frequencies&) const = default;
};

class NonAnnotatedBookmark : public std::invalid_argument {
 public:
  NonAnnotatedBookmark() : std::invalid_argument("non-annotated bookmark: tag set is empty") {}
};

/// Append-only store of (user, resource, tag set) triples with all tag
/// frequency indices maintained on insertion. Single writer; once built it
/// is safe to query concurrently.
class Folksonomy {
 public:
  /// Tags are normalized, blank tags dropped and duplicates merged before
  /// insertion. Throws NonAnnotatedBookmark when nothing is left.
  std::size_t add_bookmark(std::string_view user, std::string_view resource,
                           std::span<const std::string> tags);
  std::size_t add_bookmark(std::string_view user, std::string_view resource,
                           std::initializer_list<std::string_view> tags);

  Count tf(TagId tag, ResourceId resource) const;
  Count tf(std::string_view tag, std::string_view resource) const;

  Frequencies frequencies(TagId tag) const;
  Frequencies frequencies(std::string_view tag) const;

  const std::vector<Bookmark>& bookmarks() const { return bookmarks_; }
  /// Bookmark indices of a resource, ordered by seq.
  std::span<const std::size_t> bookmarks_of(ResourceId r) const { return by_resource_.at(r.index()); }
  const TagCounts& resource_tags(ResourceId r) const { return resource_tags_.at(r.index()); }
  const TagCounts& user_tags(UserId u) const { return user_tags_.at(u.index()); }

  std::size_t n_users() const { return users_.size(); }
  std::size_t n_resources() const { return resources_.size(); }
  std::size_t n_bookmarks() const { return bookmarks_.size(); }
  std::size_t n_tags() const { return tags_.size(); }
  bool empty() const { return bookmarks_.empty(); }

  std::optional<UserId> find_user(std::string_view s) const { return users_.find(s); }
  std::optional<ResourceId> find_resource(std::string_view s) const { return resources_.find(s); }
  /// Looks the tag up after normalization.
  std::optional<TagId> find_tag(std::string_view s) const;

  const std::string& user_name(UserId id) const { return users_.name(id); }
  const std::string& resource_name(ResourceId id) const { return resources_.name(id); }
  const std::string& tag_name(TagId id) const { return tags_.name(id); }

  /// False when the data carries no meaningful bookmark order; order
  /// dependent analyses refuse to run on such a folksonomy.
  bool ordered() const { return ordered_; }
  void set_ordered(bool ordered) { ordered_ = ordered; }

 private:
  std::size_t insert(std::string_view user, std::string_view resource, std::vector<std::string> tags);

  Interner<UserId> users_;
  Interner<ResourceId> resources_;
  Interner<TagId> tags_;

  std::vector<Bookmark> bookmarks_;
  std::vector<std::vector<std::size_t>> by_resource_;
  std::vector<Frequencies> freq_;
  std::vector<TagCounts> resource_tags_;
  std::vector<TagCounts> user_tags_;
  bool ordered_ = true;
};

}  // namespace tagfolk

#endif  // TAGFOLK_FOLKSONOMY_HPP
