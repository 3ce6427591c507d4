#include "tagfolk/folksonomy.hpp"

#include <algorithm>

#include "tagfolk/normalize.hpp"

namespace tagfolk {

std::size_t Folksonomy::add_bookmark(std::string_view user, std::string_view resource,
                                     std::span<const std::string> tags) {
  return insert(user, resource, std::vector<std::string>(tags.begin(), tags.end()));
}

std::size_t Folksonomy::add_bookmark(std::string_view user, std::string_view resource,
                                     std::initializer_list<std::string_view> tags) {
  return insert(user, resource, std::vector<std::string>(tags.begin(), tags.end()));
}

std::size_t Folksonomy::insert(std::string_view user, std::string_view resource,
                               std::vector<std::string> tags) {
  if (user.empty() || resource.empty()) throw std::invalid_argument("bookmark needs a user and a resource");

  std::vector<std::string> normalized;
  normalized.reserve(tags.size());
  for (const auto& t : tags) {
    auto n = normalize_tag(t);
    if (!n.empty()) normalized.push_back(std::move(n));
  }
  if (normalized.empty()) throw NonAnnotatedBookmark();

  const UserId u = users_.intern(user);
  const ResourceId r = resources_.intern(resource);
  if (user_tags_.size() < users_.size()) user_tags_.resize(users_.size());
  if (resource_tags_.size() < resources_.size()) {
    resource_tags_.resize(resources_.size());
    by_resource_.resize(resources_.size());
  }

  Bookmark b{u, r, {}, static_cast<Count>(by_resource_[r.index()].size())};
  b.tags.reserve(normalized.size());
  for (const auto& n : normalized) b.tags.push_back(tags_.intern(n));
  if (freq_.size() < tags_.size()) freq_.resize(tags_.size());
  std::sort(b.tags.begin(), b.tags.end());
  b.tags.erase(std::unique(b.tags.begin(), b.tags.end()), b.tags.end());

  auto& rtags = resource_tags_[r.index()];
  auto& utags = user_tags_[u.index()];
  for (TagId t : b.tags) {
    auto& fr = freq_[t.index()];
    ++fr.bf;
    if (++rtags[t] == 1) ++fr.rf;
    if (++utags[t] == 1) ++fr.uf;
  }

  const std::size_t index = bookmarks_.size();
  by_resource_[r.index()].push_back(index);
  bookmarks_.push_back(std::move(b));
  return index;
}

std::optional<TagId> Folksonomy::find_tag(std::string_view s) const {
  return tags_.find(normalize_tag(s));
}

Count Folksonomy::tf(TagId tag, ResourceId resource) const {
  if (resource.index() >= resource_tags_.size()) return 0;
  const auto& counts = resource_tags_[resource.index()];
  auto it = counts.find(tag);
  return it == counts.end() ? 0 : it->second;
}

Count Folksonomy::tf(std::string_view tag, std::string_view resource) const {
  auto t = find_tag(tag);
  auto r = find_resource(resource);
  if (!t || !r) return 0;
  return tf(*t, *r);
}

Frequencies Folksonomy::frequencies(TagId tag) const {
  if (tag.index() >= freq_.size()) return {};
  return freq_[tag.index()];
}

Frequencies Folksonomy::frequencies(std::string_view tag) const {
  auto t = find_tag(tag);
  return t ? frequencies(*t) : Frequencies{};
}

}  // namespace tagfolk
