#ifndef TAGFOLK_NORMALIZE_HPP
#define TAGFOLK_NORMALIZE_HPP

#include <string>
#include <string_view>

namespace tagfolk {

/// Lowercases a UTF-8 tag (full Unicode simple case mapping when the
/// C.UTF-8 locale is available, ASCII otherwise) and trims surrounding
/// whitespace. Invalid UTF-8 bytes are passed through unchanged.
std::string normalize_tag(std::string_view raw);

}  // namespace tagfolk

#endif  // TAGFOLK_NORMALIZE_HPP
