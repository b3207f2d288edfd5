#ifndef CACORE_AUTHORS_HPP
#define CACORE_AUTHORS_HPP

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cacore/record.hpp"
#include "cacore/text.hpp"

namespace cacore {

struct CanonicalAuthor {
    std::string canonical_name;
    int variant_count = 1;

    friend bool operator==(const CanonicalAuthor&, const CanonicalAuthor&) = default;
};

namespace detail {

inline bool is_letter(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

// A token counts as a given-name initial when it is period-terminated letter
// groups ("M.", "F.W.", "Ch.") or a bare 1-letter / 2-uppercase-letter token
// ("J", "JM"). Mixed-case bare tokens ("Wu", "Jan") are full words, never
// initials.
inline bool is_initial_token(std::string_view tok) {
    if (tok.empty()) return false;
    if (tok.back() == '.') {
        size_t group = 0;
        for (char c : tok) {
            if (c == '.') {
                if (group == 0 || group > 2) return false;
                group = 0;
            } else if (is_letter(c)) {
                ++group;
            } else {
                return false;
            }
        }
        return group == 0;  // must end on a period
    }
    if (tok.size() == 1) return is_letter(tok[0]);
    if (tok.size() == 2) {
        return std::isupper(static_cast<unsigned char>(tok[0])) &&
               std::isupper(static_cast<unsigned char>(tok[1]));
    }
    return false;
}

// Split an initial token into its letter groups: "F.W." -> {"F","W"},
// "Ch." -> {"Ch"}, "JM" -> {"J","M"}. Case is normalized to leading-upper.
inline std::vector<std::string> initial_groups(std::string_view tok) {
    std::vector<std::string> groups;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        cur[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cur[0])));
        for (size_t i = 1; i < cur.size(); ++i)
            cur[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(cur[i])));
        groups.push_back(cur);
        cur.clear();
    };
    bool has_period = tok.find('.') != std::string_view::npos;
    for (char c : tok) {
        if (c == '.') {
            flush();
        } else if (has_period) {
            cur.push_back(c);
        } else {
            // bare token: "J" or "JM" -> one group per letter
            cur.push_back(c);
            flush();
        }
    }
    flush();
    return groups;
}

struct GivenPart {
    std::string text;  // letter group without period ("F", "Ch") or full word
    bool is_initial = false;
};

struct NameParts {
    std::vector<GivenPart> given;
    std::string surname;  // may hold particles ("van der Berg")
};

inline NameParts parse_name(std::string_view cleaned) {
    NameParts parts;
    std::string given, surname;
    size_t comma = cleaned.find(',');
    if (comma != std::string_view::npos) {
        surname = trim(cleaned.substr(0, comma));
        given = trim(cleaned.substr(comma + 1));
        // strip any further commas ("Smith, J., Jr." -> given "J. Jr.")
        std::erase(given, ',');
        given = collapse_whitespace(given);
    } else {
        // leading initial tokens form the given part; everything from the
        // first non-initial token on is the surname
        std::vector<std::string> toks = split(cleaned, ' ');
        size_t k = 0;
        while (k + 1 < toks.size() && is_initial_token(toks[k])) ++k;
        if (k == 0) {
            // no leading initials: last token is the surname, the rest are
            // given names kept verbatim
            for (size_t i = 0; i + 1 < toks.size(); ++i) {
                if (!given.empty()) given.push_back(' ');
                given += toks[i];
            }
            surname = toks.back();
        } else {
            for (size_t i = 0; i < k; ++i) {
                if (!given.empty()) given.push_back(' ');
                given += toks[i];
            }
            for (size_t i = k; i < toks.size(); ++i) {
                if (!surname.empty()) surname.push_back(' ');
                surname += toks[i];
            }
        }
    }
    for (const std::string& tok : split(given, ' ')) {
        if (tok.empty()) continue;
        if (is_initial_token(tok)) {
            for (std::string& g : initial_groups(tok))
                parts.given.push_back({std::move(g), true});
        } else {
            parts.given.push_back({tok, false});  // full given name, verbatim
        }
    }
    parts.surname = surname;
    return parts;
}

}  // namespace detail

// Normalization pipeline: trim, collapse whitespace, flip "Surname, I." to
// "I. Surname", normalize initials to leading-uppercase with periods.
// Consecutive initials are joined without spaces ("F.W. Starr"), which makes
// the transform idempotent. No merging happens here: two raw names reach the
// same normalized form only when they are spelling-identical up to
// whitespace, comma order and initial punctuation.
inline std::string normalize_name(std::string_view raw) {
    std::string cleaned = collapse_whitespace(trim(raw));
    if (cleaned.empty()) throw InvalidInput("empty author name");
    detail::NameParts parts = detail::parse_name(cleaned);
    std::string out;
    bool prev_initial = false;
    for (const detail::GivenPart& g : parts.given) {
        if (g.is_initial) {
            if (!prev_initial && !out.empty()) out.push_back(' ');
            out += g.text;
            out.push_back('.');
            prev_initial = true;
        } else {
            if (!out.empty()) out.push_back(' ');
            out += g.text;
            prev_initial = false;
        }
    }
    if (!parts.surname.empty()) {
        if (!out.empty()) out.push_back(' ');
        out += parts.surname;
    }
    if (out.empty()) throw InvalidInput("author name '" + cleaned + "' has no name parts");
    return out;
}

// Surname in folded lowercase, for comparison keys.
inline std::string surname_key(std::string_view raw_or_normalized) {
    detail::NameParts parts =
        detail::parse_name(collapse_whitespace(trim(raw_or_normalized)));
    return to_lower(ascii_fold(parts.surname));
}

// Raw-to-canonical name mapping loaded from an alias file. One-step
// resolution: a canonical name may not itself alias to something else.
class AliasMap {
public:
    AliasMap() : provenance_("builtin") {}

    static AliasMap from_stream(std::istream& in, std::string provenance = "<stream>") {
        AliasMap m;
        m.provenance_ = std::move(provenance);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = trim(line);
            if (s.empty() || s[0] == '#') continue;
            size_t arrow = s.find("->");
            if (arrow == std::string::npos)
                throw InvalidInput(m.provenance_ + ":" + std::to_string(lineno) +
                                   ": expected 'raw name -> canonical name'");
            std::string raw = trim(s.substr(0, arrow));
            std::string canonical = trim(s.substr(arrow + 2));
            if (raw.empty() || canonical.empty())
                throw InvalidInput(m.provenance_ + ":" + std::to_string(lineno) +
                                   ": empty side in alias entry");
            m.add(raw, canonical);
        }
        m.check_acyclic();
        return m;
    }

    void add(std::string_view raw, std::string_view canonical) {
        entries_[normalize_name(raw)] = normalize_name(canonical);
    }

    // Rejects two-step chains: if a canonical name also appears as a raw key
    // it must map to itself.
    void check_acyclic() const {
        for (const auto& [raw, canonical] : entries_) {
            auto it = entries_.find(canonical);
            if (it != entries_.end() && it->second != canonical)
                throw InvalidInput("alias chain: '" + raw + "' -> '" + canonical +
                                   "' -> '" + it->second + "' (one-step resolution only)");
        }
    }

    const std::string* lookup(const std::string& normalized) const {
        auto it = entries_.find(normalized);
        return it == entries_.end() ? nullptr : &it->second;
    }

    size_t size() const { return entries_.size(); }
    const std::string& provenance() const { return provenance_; }
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
    std::string provenance_;
};

// Normalize, then exact alias lookup on the normalized form. Never merges
// two names without an explicit alias entry.
inline CanonicalAuthor canonicalize(std::string_view raw_name, const AliasMap& aliases) {
    std::string normalized = normalize_name(raw_name);
    if (const std::string* target = aliases.lookup(normalized))
        return CanonicalAuthor{*target, 1};
    return CanonicalAuthor{normalized, 1};
}

inline CanonicalAuthor canonicalize(std::string_view raw_name) {
    static const AliasMap empty;
    return canonicalize(raw_name, empty);
}

struct AliasSuggestion {
    std::string name_a;
    std::string name_b;
    int distance = 0;

    friend bool operator==(const AliasSuggestion&, const AliasSuggestion&) = default;
};

namespace detail {

// Two given-name groups agree when one is a prefix of the other after
// folding: F ~ F, F ~ Francis, Ch ~ Christophe, but never Ch ~ Ph.
inline bool groups_match(const std::string& a, const std::string& b) {
    std::string fa = to_lower(ascii_fold(a)), fb = to_lower(ascii_fold(b));
    if (fa.size() > fb.size()) std::swap(fa, fb);
    return fb.compare(0, fa.size(), fa) == 0;
}

// Compatible when every group of the shorter list matches some group of the
// longer one ({F} vs {F,W} merges; {Ch} vs {Ph} conflicts).
inline bool initials_compatible(const std::vector<GivenPart>& a,
                                const std::vector<GivenPart>& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    for (const GivenPart& g : small) {
        bool found = std::any_of(large.begin(), large.end(), [&](const GivenPart& h) {
            return groups_match(g.text, h.text);
        });
        if (!found) return false;
    }
    return true;
}

}  // namespace detail

// Advisory near-miss detection: pairs whose surnames are within
// `max_distance` Levenshtein steps (on folded lowercase) and whose initials
// do not conflict. Merging still requires an explicit alias entry. Output is
// deterministic: sorted by distance then names; within a pair name_a < name_b.
inline std::vector<AliasSuggestion> suggest_aliases(const std::vector<std::string>& names,
                                                    int max_distance = 2) {
    if (max_distance < 1) throw UsageError("max_distance must be >= 1");
    struct Parsed {
        std::string normalized;
        std::string surname;
        std::vector<detail::GivenPart> given;
    };
    std::vector<Parsed> parsed;
    parsed.reserve(names.size());
    for (const std::string& n : names) {
        std::string norm = normalize_name(n);
        detail::NameParts parts = detail::parse_name(norm);
        parsed.push_back({std::move(norm), to_lower(ascii_fold(parts.surname)),
                          std::move(parts.given)});
    }
    std::sort(parsed.begin(), parsed.end(),
              [](const Parsed& a, const Parsed& b) { return a.normalized < b.normalized; });
    parsed.erase(std::unique(parsed.begin(), parsed.end(),
                             [](const Parsed& a, const Parsed& b) {
                                 return a.normalized == b.normalized;
                             }),
                 parsed.end());

    std::vector<AliasSuggestion> out;
    for (size_t i = 0; i < parsed.size(); ++i) {
        for (size_t j = i + 1; j < parsed.size(); ++j) {
            int d = levenshtein(parsed[i].surname, parsed[j].surname);
            if (d > max_distance) continue;
            if (!detail::initials_compatible(parsed[i].given, parsed[j].given)) continue;
            out.push_back({parsed[i].normalized, parsed[j].normalized, d});
        }
    }
    std::sort(out.begin(), out.end(), [](const AliasSuggestion& a, const AliasSuggestion& b) {
        return std::tie(a.distance, a.name_a, a.name_b) <
               std::tie(b.distance, b.name_a, b.name_b);
    });
    return out;
}

}  // namespace cacore

#endif
