#ifndef CACORE_INGEST_HPP
#define CACORE_INGEST_HPP

#include <algorithm>
#include <cctype>
#include <ctime>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cacore/authors.hpp"
#include "cacore/bibtex.hpp"
#include "cacore/record.hpp"
#include "cacore/text.hpp"

namespace cacore {

enum class InputFormat { bibtex, jsonl, csv };

inline std::optional<InputFormat> parse_format(std::string_view tag) {
    if (tag == "bibtex") return InputFormat::bibtex;
    if (tag == "jsonl") return InputFormat::jsonl;
    if (tag == "csv") return InputFormat::csv;
    return std::nullopt;
}

struct ParseResult {
    std::vector<PublicationRecord> records;
    std::vector<ParseIssue> issues;
};

inline int current_year() {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    return utc.tm_year + 1900;
}

namespace ingest_detail {

inline bool check_year(int year, std::string& msg) {
    if (year < kMinYear || year > current_year()) {
        msg = "year " + std::to_string(year) + " outside [" + std::to_string(kMinYear) +
              ", " + std::to_string(current_year()) + "]";
        return false;
    }
    return true;
}

// Accepts "duplicate_of:ID" and "duplicate_of(ID)".
inline bool parse_duplicate_of(std::string_view flag, std::string& target) {
    constexpr std::string_view prefix = "duplicate_of";
    if (flag.substr(0, prefix.size()) != prefix) return false;
    std::string_view rest = flag.substr(prefix.size());
    if (rest.size() >= 2 && rest.front() == ':') {
        target = trim(rest.substr(1));
        return !target.empty();
    }
    if (rest.size() >= 3 && rest.front() == '(' && rest.back() == ')') {
        target = trim(rest.substr(1, rest.size() - 2));
        return !target.empty();
    }
    return false;
}

// a raw author cell must survive normalization (catches ",", ".", etc.)
inline bool usable_author(const std::string& raw, std::string& msg) {
    try {
        normalize_name(raw);
        return true;
    } catch (const InvalidInput&) {
        msg = "author name '" + raw + "' has no usable name parts";
        return false;
    }
}

inline bool apply_flag(PublicationRecord& rec, std::string_view flag, std::string& msg) {
    std::string f = trim(flag);
    if (auto known = parse_flag(f)) {
        rec.flags.insert(*known);
        return true;
    }
    std::string target;
    if (parse_duplicate_of(f, target)) {
        if (rec.duplicate_of) {
            msg = "more than one duplicate_of flag";
            return false;
        }
        rec.duplicate_of = target;
        return true;
    }
    msg = "unknown flag '" + f + "'";
    return false;
}

inline void parse_jsonl(std::istream& in, ParseResult& out) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            out.issues.push_back({lineno, std::string("invalid JSON: ") + e.what()});
            continue;
        }
        if (!obj.is_object()) {
            out.issues.push_back({lineno, "line is not a JSON object"});
            continue;
        }
        PublicationRecord rec;
        std::string err;
        auto bad = [&](const std::string& m) { out.issues.push_back({lineno, m}); };
        if (!obj.contains("id") || !obj["id"].is_string() ||
            obj["id"].get<std::string>().empty()) {
            bad("missing or empty 'id'");
            continue;
        }
        rec.id = obj["id"].get<std::string>();
        if (!obj.contains("year") || !obj["year"].is_number_integer()) {
            bad("missing or non-integer 'year'");
            continue;
        }
        rec.year = obj["year"].get<int>();
        if (!check_year(rec.year, err)) {
            bad(err);
            continue;
        }
        if (obj.contains("venue")) {
            if (!obj["venue"].is_string()) {
                bad("'venue' must be a string");
                continue;
            }
            rec.venue = obj["venue"].get<std::string>();
        }
        if (obj.contains("title")) {
            if (!obj["title"].is_string()) {
                bad("'title' must be a string");
                continue;
            }
            rec.title = obj["title"].get<std::string>();
        }
        if (!obj.contains("authors") || !obj["authors"].is_array() || obj["authors"].empty()) {
            bad("missing or empty 'authors'");
            continue;
        }
        bool authors_ok = true;
        for (const auto& a : obj["authors"]) {
            if (!a.is_string() || trim(a.get<std::string>()).empty()) {
                bad("'authors' entries must be non-empty strings");
                authors_ok = false;
                break;
            }
            if (!usable_author(a.get<std::string>(), err)) {
                bad(err);
                authors_ok = false;
                break;
            }
            rec.raw_authors.push_back(a.get<std::string>());
        }
        if (!authors_ok) continue;
        if (obj.contains("category") && !obj["category"].is_null()) {
            if (!obj["category"].is_string()) {
                bad("'category' must be a string");
                continue;
            }
            auto cat = parse_category(obj["category"].get<std::string>());
            if (!cat) {
                bad("unknown category '" + obj["category"].get<std::string>() + "'");
                continue;
            }
            rec.category = cat;
        }
        if (obj.contains("flags") && !obj["flags"].is_null()) {
            if (!obj["flags"].is_array()) {
                bad("'flags' must be an array");
                continue;
            }
            bool flags_ok = true;
            for (const auto& f : obj["flags"]) {
                if (!f.is_string() || !apply_flag(rec, f.get<std::string>(), err)) {
                    bad(err.empty() ? "invalid flag entry" : err);
                    flags_ok = false;
                    break;
                }
            }
            if (!flags_ok) continue;
        }
        out.records.push_back(std::move(rec));
    }
}

// RFC4180-style field splitting; quoted fields may contain commas, doubled
// quotes escape a quote. Multi-line quoted fields are not supported.
inline std::optional<std::vector<std::string>> csv_split(const std::string& line,
                                                         std::string& err) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            cur.push_back(c);
            ++i;
            continue;
        }
        if (c == '"' && cur.empty()) {
            quoted = true;
            ++i;
            continue;
        }
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
            ++i;
            continue;
        }
        if (c == '\r' && i + 1 == line.size()) break;
        cur.push_back(c);
        ++i;
    }
    if (quoted) {
        err = "unterminated quoted field";
        return std::nullopt;
    }
    fields.push_back(cur);
    return fields;
}

inline void parse_csv(std::istream& in, ParseResult& out) {
    std::string line;
    if (!std::getline(in, line)) return;  // empty input: zero records
    std::string err;
    auto header = csv_split(line, err);
    if (!header) {
        out.issues.push_back({1, "bad header: " + err});
        return;
    }
    std::vector<std::string> want = {"id", "year", "venue", "authors", "category", "flags"};
    bool has_title = false;
    std::vector<std::string> cols;
    for (const std::string& h : *header) cols.push_back(trim(h));
    if (cols.size() == want.size() + 1 && cols.back() == "title") {
        has_title = true;
        cols.pop_back();
    }
    if (cols != want) {
        out.issues.push_back(
            {1, "header must be 'id,year,venue,authors,category,flags[,title]'"});
        return;
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = csv_split(line, err);
        if (!fields) {
            out.issues.push_back({lineno, err});
            continue;
        }
        size_t expected = want.size() + (has_title ? 1 : 0);
        if (fields->size() != expected) {
            out.issues.push_back({lineno, "expected " + std::to_string(expected) +
                                              " cells, got " + std::to_string(fields->size())});
            continue;
        }
        PublicationRecord rec;
        rec.id = trim((*fields)[0]);
        if (rec.id.empty()) {
            out.issues.push_back({lineno, "empty id cell"});
            continue;
        }
        try {
            rec.year = std::stoi(trim((*fields)[1]));
        } catch (const std::exception&) {
            out.issues.push_back({lineno, "year '" + trim((*fields)[1]) + "' is not an integer"});
            continue;
        }
        if (!check_year(rec.year, err)) {
            out.issues.push_back({lineno, err});
            continue;
        }
        rec.venue = trim((*fields)[2]);
        bool ok = true;
        for (const std::string& a : split((*fields)[3], ';')) {
            std::string name = trim(a);
            if (name.empty()) {
                out.issues.push_back({lineno, "empty author cell"});
                ok = false;
                break;
            }
            if (!usable_author(name, err)) {
                out.issues.push_back({lineno, err});
                ok = false;
                break;
            }
            rec.raw_authors.push_back(name);
        }
        if (!ok) continue;
        if (rec.raw_authors.empty()) {
            out.issues.push_back({lineno, "empty author cell"});
            continue;
        }
        std::string cat = trim((*fields)[4]);
        if (!cat.empty()) {
            auto parsed = parse_category(cat);
            if (!parsed) {
                out.issues.push_back({lineno, "unknown category '" + cat + "'"});
                continue;
            }
            rec.category = parsed;
        }
        std::string flags_cell = trim((*fields)[5]);
        if (!flags_cell.empty()) {
            bool flags_ok = true;
            for (const std::string& f : split(flags_cell, ';')) {
                if (trim(f).empty()) continue;
                if (!apply_flag(rec, f, err)) {
                    out.issues.push_back({lineno, err});
                    flags_ok = false;
                    break;
                }
            }
            if (!flags_ok) continue;
        }
        if (has_title) rec.title = trim((*fields)[6]);
        out.records.push_back(std::move(rec));
    }
}

}  // namespace ingest_detail

// Parse one stream in the declared format. Malformed entries become issues
// with line numbers; well-formed entries come back in input order. Repeated
// ids within the stream are rejected (ids are unique within a corpus).
inline ParseResult parse_records(std::istream& in, InputFormat format) {
    if (!in.good()) throw IoError("unreadable input stream");
    ParseResult out;
    switch (format) {
        case InputFormat::jsonl:
            ingest_detail::parse_jsonl(in, out);
            break;
        case InputFormat::csv:
            ingest_detail::parse_csv(in, out);
            break;
        case InputFormat::bibtex: {
            std::ostringstream buf;
            buf << in.rdbuf();
            std::vector<PublicationRecord> parsed;
            parse_bibtex(buf.str(), parsed, out.issues);
            for (auto& rec : parsed) {
                std::string err;
                bool ok = true;
                for (const std::string& a : rec.raw_authors) {
                    if (!ingest_detail::usable_author(a, err)) {
                        out.issues.push_back({0, "entry '" + rec.id + "': " + err});
                        ok = false;
                        break;
                    }
                }
                if (ok) out.records.push_back(std::move(rec));
            }
            break;
        }
    }
    if (in.bad()) throw IoError("I/O error while reading input");
    std::unordered_set<std::string> seen;
    std::vector<PublicationRecord> unique;
    unique.reserve(out.records.size());
    for (auto& rec : out.records) {
        if (!seen.insert(rec.id).second) {
            out.issues.push_back({0, "duplicate id '" + rec.id + "'"});
            continue;
        }
        unique.push_back(std::move(rec));
    }
    out.records = std::move(unique);
    return out;
}

// Corpus-level invariants that cannot be checked per stream: id uniqueness
// across merged inputs and duplicate_of referential integrity.
inline std::vector<ParseIssue> validate_corpus(const std::vector<PublicationRecord>& records) {
    std::vector<ParseIssue> issues;
    std::unordered_set<std::string> ids;
    for (const auto& rec : records) {
        if (!ids.insert(rec.id).second)
            issues.push_back({0, "duplicate id '" + rec.id + "' across inputs"});
    }
    for (const auto& rec : records) {
        if (rec.duplicate_of && !ids.count(*rec.duplicate_of))
            issues.push_back({0, "record '" + rec.id + "': duplicate_of references unknown id '" +
                                     *rec.duplicate_of + "'"});
        if (rec.duplicate_of && *rec.duplicate_of == rec.id)
            issues.push_back({0, "record '" + rec.id + "': duplicate_of references itself"});
    }
    return issues;
}

// JSONL writer; inverse of the jsonl parser (round-trip identity).
inline void write_jsonl(std::ostream& out, const std::vector<PublicationRecord>& records) {
    for (const auto& rec : records) {
        nlohmann::ordered_json obj;
        obj["id"] = rec.id;
        obj["year"] = rec.year;
        obj["venue"] = rec.venue;
        obj["authors"] = rec.raw_authors;
        if (rec.category) obj["category"] = std::string(category_code(*rec.category));
        std::vector<std::string> flags;
        for (RecordFlag f : rec.flags) flags.emplace_back(flag_name(f));
        if (rec.duplicate_of) flags.push_back("duplicate_of:" + *rec.duplicate_of);
        if (!flags.empty()) obj["flags"] = flags;
        if (!rec.title.empty()) obj["title"] = rec.title;
        out << obj.dump() << '\n';
    }
}

// Ordered venue-pattern rules: `PATTERN -> CATEGORY`, case-insensitive
// substring match, first hit wins.
class ClassificationRules {
public:
    struct Rule {
        std::string pattern;  // stored lowercase
        Category category;
    };

    ClassificationRules() = default;

    static ClassificationRules from_stream(std::istream& in,
                                           std::string provenance = "<stream>") {
        ClassificationRules rules;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = trim(line);
            if (s.empty() || s[0] == '#') continue;
            size_t arrow = s.rfind("->");
            if (arrow == std::string::npos)
                throw InvalidInput(provenance + ":" + std::to_string(lineno) +
                                   ": expected 'PATTERN -> CATEGORY'");
            std::string pattern = trim(s.substr(0, arrow));
            std::string cat = trim(s.substr(arrow + 2));
            auto parsed = parse_category(cat);
            if (pattern.empty() || !parsed)
                throw InvalidInput(provenance + ":" + std::to_string(lineno) +
                                   ": bad rule '" + s + "'");
            rules.add(pattern, *parsed);
        }
        return rules;
    }

    // Conference-marker vocabulary; ambiguous conference-vs-journal venues
    // resolve to proceedings.
    static ClassificationRules defaults() {
        ClassificationRules r;
        r.add("proceedings", Category::proceedings);
        r.add("proc.", Category::proceedings);
        r.add("conference", Category::proceedings);
        r.add("conf.", Category::proceedings);
        r.add("workshop", Category::proceedings);
        r.add("symposium", Category::proceedings);
        r.add("summer school", Category::proceedings);
        r.add("winter school", Category::proceedings);
        r.add("lecture notes", Category::proceedings);
        r.add("encyclopedia", Category::encyclopedia);
        r.add("encyclopaedia", Category::encyclopedia);
        r.add("handbook", Category::book_chapter);
        r.add("book chapter", Category::book_chapter);
        return r;
    }

    void add(std::string_view pattern, Category category) {
        rules_.push_back({to_lower(pattern), category});
    }

    // user rules first, then the built-in vocabulary
    ClassificationRules followed_by(const ClassificationRules& fallback) const {
        ClassificationRules merged = *this;
        merged.rules_.insert(merged.rules_.end(), fallback.rules_.begin(),
                             fallback.rules_.end());
        return merged;
    }

    std::optional<Category> match(std::string_view venue) const {
        std::string v = to_lower(venue);
        for (const Rule& r : rules_) {
            if (v.find(r.pattern) != std::string::npos) return r.category;
        }
        return std::nullopt;
    }

    const std::vector<Rule>& rules() const { return rules_; }

private:
    std::vector<Rule> rules_;
};

// Explicit override from the input wins; otherwise first matching venue rule;
// otherwise journal.
inline Category classify_category(const PublicationRecord& record,
                                  const ClassificationRules& rules) {
    if (record.category) return *record.category;
    if (auto matched = rules.match(record.venue)) return *matched;
    return Category::journal;
}

inline void classify_all(std::vector<PublicationRecord>& records,
                         const ClassificationRules& rules) {
    for (auto& rec : records) rec.category = classify_category(rec, rules);
}

struct DedupeResult {
    std::vector<PublicationRecord> kept;
    std::vector<std::pair<std::string, std::string>> dropped;  // (id, reason)
};

namespace ingest_detail {

// Duplicate key: normalized title (lowercase, punctuation stripped,
// whitespace collapsed) + sorted canonical author surnames. Year proximity
// (+/-2) is applied within a key group. Records without a title never match.
inline std::string normalized_title(std::string_view title) {
    std::string folded = to_lower(ascii_fold(title));
    std::string out;
    out.reserve(folded.size());
    for (char c : folded) {
        if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(c);
        else if (!out.empty() && out.back() != ' ') out.push_back(' ');
    }
    return trim(out);
}

inline std::string duplicate_key(const PublicationRecord& rec, const AliasMap& aliases) {
    std::string title = normalized_title(rec.title);
    if (title.empty()) return {};
    std::vector<std::string> surnames;
    for (const std::string& a : rec.raw_authors)
        surnames.push_back(surname_key(canonicalize(a, aliases).canonical_name));
    std::sort(surnames.begin(), surnames.end());
    surnames.erase(std::unique(surnames.begin(), surnames.end()), surnames.end());
    std::string key = title;
    for (const std::string& s : surnames) {
        key.push_back('|');
        key += s;
    }
    return key;
}

}  // namespace ingest_detail

// Drops errata, translations and edited volumes; keeps Comments and Replies
// (bona fide papers). Explicitly flagged duplicates and later same-key
// reprints (within a +/-2 year window of the kept earliest record) drop with
// reason "duplicate". Kept records stay in input order.
inline DedupeResult dedupe(const std::vector<PublicationRecord>& records,
                           const AliasMap& aliases = {}) {
    DedupeResult result;
    std::vector<const PublicationRecord*> survivors;
    for (const auto& rec : records) {
        if (rec.has_flag(RecordFlag::erratum)) {
            result.dropped.emplace_back(rec.id, "erratum");
        } else if (rec.has_flag(RecordFlag::translation)) {
            result.dropped.emplace_back(rec.id, "translation");
        } else if (rec.has_flag(RecordFlag::edited_volume)) {
            result.dropped.emplace_back(rec.id, "edited_volume");
        } else if (rec.duplicate_of) {
            result.dropped.emplace_back(rec.id, "duplicate");
        } else {
            survivors.push_back(&rec);
        }
    }

    // key -> year-sorted cluster anchors
    std::unordered_set<const PublicationRecord*> drop_set;
    std::map<std::string, std::vector<const PublicationRecord*>> groups;
    for (const PublicationRecord* rec : survivors) {
        std::string key = ingest_detail::duplicate_key(*rec, aliases);
        if (!key.empty()) groups[key].push_back(rec);
    }
    for (auto& [key, members] : groups) {
        if (members.size() < 2) continue;
        std::stable_sort(members.begin(), members.end(),
                         [](const PublicationRecord* a, const PublicationRecord* b) {
                             return a->year < b->year;
                         });
        int anchor_year = members.front()->year;
        for (size_t i = 1; i < members.size(); ++i) {
            if (members[i]->year - anchor_year <= 2) {
                drop_set.insert(members[i]);
            } else {
                anchor_year = members[i]->year;  // distinct enough: new cluster
            }
        }
    }
    for (const PublicationRecord* rec : survivors) {
        if (drop_set.count(rec)) result.dropped.emplace_back(rec->id, "duplicate");
        else result.kept.push_back(*rec);
    }
    return result;
}

// Merge book chapters and encyclopedia entries into the generalized
// proceedings list; journal records untouched. Preserves count identity
// p_after = p + bc + e.
inline std::vector<PublicationRecord> merge_proceedings(std::vector<PublicationRecord> records) {
    for (auto& rec : records) {
        if (rec.category == Category::book_chapter || rec.category == Category::encyclopedia)
            rec.category = Category::proceedings;
    }
    return records;
}

}  // namespace cacore

#endif
