#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gate {

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string fold_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(ascii_lower(c));
  return out;
}

// Matching form of a text: case-folded, whitespace runs collapsed to one space,
// remaining control characters stripped. to_original maps each byte of `text`
// back to a byte offset in the input so evidence can quote the verbatim source.
struct NormalizedText {
  std::string text;
  std::vector<std::size_t> to_original;
};

inline NormalizedText normalize_for_match(std::string_view input) {
  NormalizedText out;
  out.text.reserve(input.size());
  out.to_original.reserve(input.size());
  bool pending_space = false;
  std::size_t pending_at = 0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(input[i]);
    if (is_ascii_space(static_cast<char>(c))) {
      if (!pending_space) {
        pending_space = true;
        pending_at = i;
      }
      continue;
    }
    if (c < 0x20 || c == 0x7F) continue;  // non-whitespace control: strip
    if (pending_space) {
      if (!out.text.empty()) {
        out.text.push_back(' ');
        out.to_original.push_back(pending_at);
      }
      pending_space = false;
    }
    out.text.push_back(ascii_lower(static_cast<char>(c)));
    out.to_original.push_back(i);
  }
  return out;
}

inline double printable_ratio(std::string_view s) {
  if (s.empty()) return 0.0;
  std::size_t printable = 0;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (c == '\n' || c == '\t' || c == '\r' || (u >= 0x20 && u < 0x7F)) ++printable;
  }
  return static_cast<double>(printable) / static_cast<double>(s.size());
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (char c : s) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

inline std::string to_hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

// Decodes one UTF-8 code point starting at i; advances i. Invalid bytes are
// returned as 0xFFFD-style sentinel (the byte value | kInvalidBit) and step one.
inline constexpr std::uint32_t kInvalidUtf8 = 0x80000000u;

inline std::uint32_t utf8_next(std::string_view s, std::size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) {
    return i + k < s.size() &&
           (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0 && cont(1)) {
    std::uint32_t cp = (static_cast<std::uint32_t>(b0 & 0x1F) << 6) |
                       (static_cast<unsigned char>(s[i + 1]) & 0x3F);
    i += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    std::uint32_t cp = (static_cast<std::uint32_t>(b0 & 0x0F) << 12) |
                       ((static_cast<unsigned char>(s[i + 1]) & 0x3F) << 6) |
                       (static_cast<unsigned char>(s[i + 2]) & 0x3F);
    i += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    std::uint32_t cp = (static_cast<std::uint32_t>(b0 & 0x07) << 18) |
                       ((static_cast<unsigned char>(s[i + 1]) & 0x3F) << 12) |
                       ((static_cast<unsigned char>(s[i + 2]) & 0x3F) << 6) |
                       (static_cast<unsigned char>(s[i + 3]) & 0x3F);
    i += 4;
    return cp;
  }
  i += 1;
  return kInvalidUtf8 | b0;
}

inline void utf8_append(std::string& out, std::uint32_t cp) {
  if (cp & kInvalidUtf8) {
    out.push_back(static_cast<char>(cp & 0xFF));
  } else if (cp < 0x80) {
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

struct UrlRef {
  std::string url;
  std::string host;
  std::size_t pos = 0;
};

// Extracts http(s) URLs. Host is the authority up to the first '/', ':' after
// the scheme's "://", '?', '#', or whitespace.
inline std::vector<UrlRef> find_urls(std::string_view text) {
  std::vector<UrlRef> out;
  const std::string_view schemes[] = {"http://", "https://"};
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t best = std::string_view::npos;
    std::size_t scheme_len = 0;
    for (auto scheme : schemes) {
      std::size_t p = text.find(scheme, i);
      if (p != std::string_view::npos && (best == std::string_view::npos || p < best)) {
        best = p;
        scheme_len = scheme.size();
      }
    }
    if (best == std::string_view::npos) break;
    std::size_t host_start = best + scheme_len;
    std::size_t j = host_start;
    while (j < text.size()) {
      char c = text[j];
      if (is_ascii_space(c) || c == '/' || c == ':' || c == '?' || c == '#' ||
          c == '"' || c == '\'' || c == ')' || c == '>' || c == ',' || c == ';')
        break;
      ++j;
    }
    std::size_t url_end = j;
    while (url_end < text.size()) {
      char c = text[url_end];
      if (is_ascii_space(c) || c == '"' || c == '\'' || c == ')' || c == '>' || c == ',') break;
      ++url_end;
    }
    std::string host(text.substr(host_start, j - host_start));
    // trailing sentence punctuation is not part of the host
    while (!host.empty() && (host.back() == '.' || host.back() == ';')) host.pop_back();
    std::string url(text.substr(best, url_end - best));
    while (!url.empty() && (url.back() == '.' || url.back() == ';')) url.pop_back();
    if (!host.empty()) out.push_back(UrlRef{std::move(url), fold_lower(host), best});
    i = j;
  }
  return out;
}

inline bool host_matches(std::string_view host, std::string_view pattern) {
  if (host == pattern) return true;
  if (host.size() > pattern.size() + 1 &&
      host.substr(host.size() - pattern.size()) == pattern &&
      host[host.size() - pattern.size() - 1] == '.')
    return true;
  return false;
}

inline bool contains_fold(std::string_view haystack, std::string_view needle) {
  return fold_lower(haystack).find(fold_lower(needle)) != std::string::npos;
}

inline std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace gate
