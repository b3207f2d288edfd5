#ifndef CACORE_TEXT_HPP
#define CACORE_TEXT_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cacore {

inline std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
        } else {
            if (in_space && !out.empty()) out.push_back(' ');
            in_space = false;
            out.push_back(c);
        }
    }
    return out;
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.emplace_back(s.substr(pos));
            break;
        }
        out.emplace_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    std::string h = to_lower(haystack), n = to_lower(needle);
    return h.find(n) != std::string::npos;
}

namespace detail {

// Latin Extended-A (U+0100..U+017F) to ASCII base letters.
inline const char* latin_ext_a(std::uint32_t cp) {
    static const char* table[128] = {
        "A", "a", "A", "a", "A", "a",                      // 0100-0105
        "C", "c", "C", "c", "C", "c", "C", "c",            // 0106-010D
        "D", "d", "D", "d",                                // 010E-0111
        "E", "e", "E", "e", "E", "e", "E", "e", "E", "e",  // 0112-011B
        "G", "g", "G", "g", "G", "g", "G", "g",            // 011C-0123
        "H", "h", "H", "h",                                // 0124-0127
        "I", "i", "I", "i", "I", "i", "I", "i", "I", "i",  // 0128-0131
        "IJ", "ij",                                        // 0132-0133
        "J", "j",                                          // 0134-0135
        "K", "k", "k",                                     // 0136-0138
        "L", "l", "L", "l", "L", "l", "L", "l", "L", "l",  // 0139-0142
        "N", "n", "N", "n", "N", "n", "n", "N", "n",       // 0143-014B
        "O", "o", "O", "o", "O", "o",                      // 014C-0151
        "OE", "oe",                                        // 0152-0153
        "R", "r", "R", "r", "R", "r",                      // 0154-0159
        "S", "s", "S", "s", "S", "s", "S", "s",            // 015A-0161
        "T", "t", "T", "t", "T", "t",                      // 0162-0167
        "U", "u", "U", "u", "U", "u", "U", "u", "U", "u", "U", "u",  // 0168-0173
        "W", "w",                                          // 0174-0175
        "Y", "y", "Y",                                     // 0176-0178
        "Z", "z", "Z", "z", "Z", "z",                      // 0179-017E
        "s",                                               // 017F
    };
    return table[cp - 0x0100];
}

inline const char* latin1(std::uint32_t cp) {
    switch (cp) {
        case 0xC0: case 0xC1: case 0xC2: case 0xC3: case 0xC4: case 0xC5: return "A";
        case 0xC6: return "AE";
        case 0xC7: return "C";
        case 0xC8: case 0xC9: case 0xCA: case 0xCB: return "E";
        case 0xCC: case 0xCD: case 0xCE: case 0xCF: return "I";
        case 0xD0: return "D";
        case 0xD1: return "N";
        case 0xD2: case 0xD3: case 0xD4: case 0xD5: case 0xD6: case 0xD8: return "O";
        case 0xD9: case 0xDA: case 0xDB: case 0xDC: return "U";
        case 0xDD: return "Y";
        case 0xDE: return "Th";
        case 0xDF: return "ss";
        case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5: return "a";
        case 0xE6: return "ae";
        case 0xE7: return "c";
        case 0xE8: case 0xE9: case 0xEA: case 0xEB: return "e";
        case 0xEC: case 0xED: case 0xEE: case 0xEF: return "i";
        case 0xF0: return "d";
        case 0xF1: return "n";
        case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6: case 0xF8: return "o";
        case 0xF9: case 0xFA: case 0xFB: case 0xFC: return "u";
        case 0xFD: case 0xFF: return "y";
        case 0xFE: return "th";
        default: return nullptr;
    }
}

}  // namespace detail

// Transliterate accented Latin letters to plain ASCII; code points without an
// ASCII equivalent (CJK, Hangul, ...) pass through unchanged. Used for
// comparison keys only -- display strings keep their diacritics.
inline std::string ascii_fold(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        // decode one UTF-8 sequence
        std::uint32_t cp = 0;
        size_t len = 0;
        if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; len = 2; }
        else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; len = 3; }
        else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; len = 4; }
        else { out.push_back(static_cast<char>(c)); ++i; continue; }
        if (i + len > s.size()) { out.push_back(static_cast<char>(c)); ++i; continue; }
        bool valid = true;
        for (size_t k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) { valid = false; break; }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!valid) { out.push_back(static_cast<char>(c)); ++i; continue; }
        const char* repl = nullptr;
        if (cp >= 0xC0 && cp <= 0xFF) repl = detail::latin1(cp);
        else if (cp >= 0x0100 && cp <= 0x017F) repl = detail::latin_ext_a(cp);
        if (repl) out.append(repl);
        else out.append(s.substr(i, len));
        i += len;
    }
    return out;
}

// Classic two-row Levenshtein on bytes.
inline int levenshtein(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    std::vector<int> prev(a.size() + 1), cur(a.size() + 1);
    for (size_t j = 0; j <= a.size(); ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= b.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (size_t j = 1; j <= a.size(); ++j) {
            int del = prev[j] + 1;
            int ins = cur[j - 1] + 1;
            int sub = prev[j - 1] + (a[j - 1] == b[i - 1] ? 0 : 1);
            cur[j] = std::min({del, ins, sub});
        }
        std::swap(prev, cur);
    }
    return prev[a.size()];
}

}  // namespace cacore

#endif
