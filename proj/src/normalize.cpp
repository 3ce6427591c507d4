#include "tagfolk/normalize.hpp"

#include <locale>
#include <optional>
#include <vector>

namespace tagfolk {
namespace {

const std::ctype<wchar_t>* unicode_ctype() {
  static const std::optional<std::locale> loc = []() -> std::optional<std::locale> {
    for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
      try {
        return std::locale(name);
      } catch (const std::runtime_error&) {
      }
    }
    return std::nullopt;
  }();
  if (!loc) return nullptr;
  return &std::use_facet<std::ctype<wchar_t>>(*loc);
}

// Decoded code point, or the raw byte value with `valid == false`.
struct CodePoint {
  char32_t value;
  bool valid;
};

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (ok) {
      out.push_back({cp, true});
      i += len;
    } else {
      out.push_back({b0, false});
      i += 1;
    }
  }
  return out;
}

void encode(CodePoint c, std::string& out) {
  if (!c.valid) {
    out.push_back(static_cast<char>(c.value));
    return;
  }
  const char32_t cp = c.value;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(const std::ctype<wchar_t>* ct, CodePoint c) {
  if (!c.valid) return false;
  if (c.value < 0x80) return c.value == ' ' || (c.value >= '\t' && c.value <= '\r');
  if (c.value == 0xFEFF || c.value == 0x00A0 || c.value == 0x202F) return true;
  return ct != nullptr && ct->is(std::ctype_base::space, static_cast<wchar_t>(c.value));
}

char32_t to_lower(const std::ctype<wchar_t>* ct, char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + ('a' - 'A') : cp;
  if (ct == nullptr) return cp;
  return static_cast<char32_t>(ct->tolower(static_cast<wchar_t>(cp)));
}

}  // namespace

std::string normalize_tag(std::string_view raw) {
  const auto* ct = unicode_ctype();
  auto cps = decode(raw);
  std::size_t begin = 0;
  std::size_t end = cps.size();
  while (begin < end && is_space(ct, cps[begin])) ++begin;
  while (end > begin && is_space(ct, cps[end - 1])) --end;

  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = begin; i < end; ++i) {
    CodePoint c = cps[i];
    if (c.valid) c.value = to_lower(ct, c.value);
    encode(c, out);
  }
  return out;
}

}  // namespace tagfolk
