#ifndef CACORE_RECORD_HPP
#define CACORE_RECORD_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cacore {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct InvalidInput : Error {
    using Error::Error;
};

// Publication categories: journal (j), proceedings (p), book chapter (bc),
// encyclopedia (e).
enum class Category { journal, proceedings, book_chapter, encyclopedia };

inline std::string_view category_code(Category c) {
    switch (c) {
        case Category::journal: return "j";
        case Category::proceedings: return "p";
        case Category::book_chapter: return "bc";
        case Category::encyclopedia: return "e";
    }
    return "?";
}

inline std::optional<Category> parse_category(std::string_view code) {
    if (code == "j") return Category::journal;
    if (code == "p") return Category::proceedings;
    if (code == "bc") return Category::book_chapter;
    if (code == "e") return Category::encyclopedia;
    return std::nullopt;
}

enum class RecordFlag { erratum, comment, reply, translation, edited_volume };

inline std::string_view flag_name(RecordFlag f) {
    switch (f) {
        case RecordFlag::erratum: return "erratum";
        case RecordFlag::comment: return "comment";
        case RecordFlag::reply: return "reply";
        case RecordFlag::translation: return "translation";
        case RecordFlag::edited_volume: return "edited_volume";
    }
    return "?";
}

inline std::optional<RecordFlag> parse_flag(std::string_view name) {
    if (name == "erratum") return RecordFlag::erratum;
    if (name == "comment") return RecordFlag::comment;
    if (name == "reply") return RecordFlag::reply;
    if (name == "translation") return RecordFlag::translation;
    if (name == "edited_volume") return RecordFlag::edited_volume;
    return std::nullopt;
}

// One publication. `raw_authors` keeps input order (author position is
// meaningful). `category` is empty until classification unless the input
// declared it explicitly. `title` is optional and feeds duplicate detection
// only; corpora without titles simply skip key-based deduplication.
struct PublicationRecord {
    std::string id;
    int year = 0;
    std::string venue;
    std::string title;
    std::vector<std::string> raw_authors;
    std::optional<Category> category;
    std::set<RecordFlag> flags;
    std::optional<std::string> duplicate_of;

    bool has_flag(RecordFlag f) const { return flags.count(f) != 0; }
    Category effective_category() const { return category.value_or(Category::journal); }

    friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct YearWindow {
    int start = 0;
    int end = 0;

    bool contains(int year) const { return year >= start && year <= end; }
    bool overlaps(const YearWindow& other) const {
        return start <= other.end && other.start <= end;
    }

    friend bool operator==(const YearWindow&, const YearWindow&) = default;
};

inline constexpr int kMinYear = 1900;
// Open-ended windows ("2000:") use this sentinel end year.
inline constexpr int kOpenEndYear = 9999;

}  // namespace cacore

#endif
