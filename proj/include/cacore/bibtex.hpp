#ifndef CACORE_BIBTEX_HPP
#define CACORE_BIBTEX_HPP

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cacore/record.hpp"
#include "cacore/text.hpp"

namespace cacore {

struct ParseIssue {
    int line = 0;
    std::string message;

    friend bool operator==(const ParseIssue&, const ParseIssue&) = default;
};

namespace bibtex_detail {

// Pragmatic subset, not a full grammar: @article/@inproceedings/@proceedings/
// @incollection/@inbook entries, brace- or quote-delimited values, %-to-EOL
// comments between entries. LaTeX accent macros are passed through verbatim.
class Parser {
public:
    Parser(std::string_view text, std::vector<PublicationRecord>& records,
           std::vector<ParseIssue>& issues)
        : text_(text), records_(records), issues_(issues) {}

    void run() {
        while (true) {
            skip_to_entry();
            if (eof()) break;
            int entry_line = line_;
            try {
                parse_entry();
            } catch (const EntryError& e) {
                issues_.push_back({e.line, e.what()});
                recover(entry_line);
            }
        }
    }

private:
    struct EntryError : Error {
        EntryError(int l, const std::string& msg) : Error(msg), line(l) {}
        int line;
    };

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    // Between entries: whitespace, % comments and stray prose are ignored.
    void skip_to_entry() {
        while (!eof()) {
            char c = peek();
            if (c == '@') return;
            if (c == '%') {
                while (!eof() && peek() != '\n') advance();
            } else {
                advance();
            }
        }
    }

    // After a malformed entry, resync at the next '@' at line start-ish.
    void recover(int /*entry_line*/) {
        while (!eof() && peek() != '@') advance();
    }

    std::string read_name() {
        std::string out;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == ':' || c == '.' || c == '+' || c == '/') {
                out.push_back(advance());
            } else {
                break;
            }
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& msg) { throw EntryError(line_, msg); }

    void expect(char c) {
        skip_ws();
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    // Value forms: {balanced braces}, "quoted", or a bare word/number.
    std::string read_value() {
        skip_ws();
        if (eof()) fail("unexpected end of input in field value");
        char c = peek();
        if (c == '{') {
            advance();
            std::string out;
            int depth = 1;
            while (!eof()) {
                char d = advance();
                if (d == '{') ++depth;
                else if (d == '}' && --depth == 0) return out;
                out.push_back(d);
            }
            fail("unbalanced braces in field value");
        }
        if (c == '"') {
            advance();
            std::string out;
            int depth = 0;
            while (!eof()) {
                char d = advance();
                if (d == '{') ++depth;
                if (d == '}') --depth;
                if (d == '"' && depth == 0) return out;
                out.push_back(d);
            }
            fail("unterminated quoted field value");
        }
        std::string out;
        while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' &&
               peek() != '}' && peek() != ')') {
            out.push_back(advance());
        }
        if (out.empty()) fail("empty field value");
        return out;
    }

    void parse_entry() {
        expect('@');
        std::string type = to_lower(read_name());
        int type_line = line_;
        skip_ws();
        if (eof() || (peek() != '{' && peek() != '(')) fail("expected '{' after entry type");
        char open = advance();
        char close = open == '{' ? '}' : ')';

        if (type == "comment") {  // skip silently
            while (!eof() && peek() != close) advance();
            if (!eof()) advance();
            return;
        }
        if (type == "string" || type == "preamble") {
            // not part of the subset; report, then skip the body
            issues_.push_back({type_line, "unsupported directive '@" + type + "' skipped"});
            int depth = 1;
            while (!eof() && depth > 0) {
                char d = advance();
                if (d == open) ++depth;
                if (d == close) --depth;
            }
            return;
        }

        std::optional<Category> category;
        if (type == "article") category = Category::journal;
        else if (type == "inproceedings" || type == "proceedings") category = Category::proceedings;
        else if (type == "incollection" || type == "inbook") category = Category::book_chapter;

        skip_ws();
        std::string key = read_name();
        if (key.empty()) fail("entry has no citation key");
        expect(',');

        std::map<std::string, std::string> fields;
        while (true) {
            skip_ws();
            if (eof()) fail("unexpected end of input inside entry '" + key + "'");
            if (peek() == close) { advance(); break; }
            std::string fname = to_lower(read_name());
            if (fname.empty()) fail("expected field name in entry '" + key + "'");
            expect('=');
            std::string value = read_value();
            fields[fname] = collapse_whitespace(trim(value));
            skip_ws();
            if (!eof() && peek() == ',') advance();
        }

        if (!category) {
            issues_.push_back({type_line, "entry '" + key + "': unsupported entry type '@" +
                                              type + "'"});
            return;
        }

        PublicationRecord rec;
        rec.id = key;
        rec.category = category;

        auto year_it = fields.find("year");
        if (year_it == fields.end()) {
            issues_.push_back({type_line, "entry '" + key + "': missing year"});
            return;
        }
        try {
            rec.year = std::stoi(year_it->second);
        } catch (const std::exception&) {
            issues_.push_back({type_line, "entry '" + key + "': year '" + year_it->second +
                                              "' is not an integer"});
            return;
        }

        auto author_it = fields.find("author");
        if (author_it == fields.end() || trim(author_it->second).empty()) {
            issues_.push_back({type_line, "entry '" + key + "': missing authors"});
            return;
        }
        rec.raw_authors = split_authors(author_it->second);
        if (rec.raw_authors.empty()) {
            issues_.push_back({type_line, "entry '" + key + "': missing authors"});
            return;
        }

        if (auto it = fields.find("journal"); it != fields.end()) rec.venue = it->second;
        else if (auto bt = fields.find("booktitle"); bt != fields.end()) rec.venue = bt->second;
        if (auto it = fields.find("title"); it != fields.end()) rec.title = it->second;

        records_.push_back(std::move(rec));
    }

    // "A. Pekalski and K. Sznajd-Weron" -> two names; the separator is the
    // standalone word "and", case-insensitive.
    static std::vector<std::string> split_authors(std::string_view field) {
        std::vector<std::string> out;
        std::string cur;
        std::vector<std::string> toks = split(collapse_whitespace(trim(field)), ' ');
        for (const std::string& t : toks) {
            if (to_lower(t) == "and") {
                if (!trim(cur).empty()) out.push_back(trim(cur));
                cur.clear();
            } else {
                if (!cur.empty()) cur.push_back(' ');
                cur += t;
            }
        }
        if (!trim(cur).empty()) out.push_back(trim(cur));
        return out;
    }

    std::string_view text_;
    std::vector<PublicationRecord>& records_;
    std::vector<ParseIssue>& issues_;
    size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace bibtex_detail

inline void parse_bibtex(std::string_view text, std::vector<PublicationRecord>& records,
                         std::vector<ParseIssue>& issues) {
    bibtex_detail::Parser(text, records, issues).run();
}

}  // namespace cacore

#endif
