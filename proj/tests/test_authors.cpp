#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "cacore/authors.hpp"
#include "cacore/prng.hpp"

using namespace cacore;

TEST_CASE("normalize_name unifies comma and initial forms") {
    CHECK(normalize_name("Buldryev, S.") == "S. Buldryev");
    CHECK(normalize_name(" M.  Ausloos ") == "M. Ausloos");
    CHECK(normalize_name("F. W. Starr") == "F.W. Starr");
    CHECK(normalize_name("Starr, F.W.") == "F.W. Starr");
    CHECK(normalize_name("m. ausloos") == "M. ausloos");
    CHECK(normalize_name("Ch. Laurent") == "Ch. Laurent");
    CHECK(normalize_name("JM Kowalski") == "J.M. Kowalski");
    CHECK(normalize_name("Sznajd-Weron, K.") == "K. Sznajd-Weron");
    CHECK(normalize_name("Ausloos") == "Ausloos");
    // full given names are never abbreviated (that would silently merge)
    CHECK(normalize_name("Marcel Ausloos") == "Marcel Ausloos");
    CHECK(normalize_name("Wu Xiaoming") == "Wu Xiaoming");
}

TEST_CASE("normalize_name rejects empty input") {
    CHECK_THROWS_AS(normalize_name("   "), InvalidInput);
    CHECK_THROWS_AS(normalize_name(""), InvalidInput);
    CHECK_THROWS_AS(normalize_name(" , "), InvalidInput);
}

TEST_CASE("normalize_name is idempotent on generated names") {
    SplitMix64 rng(7);
    const char* surnames[] = {"Stanley", "Stauffer", "Ausloos", "Miśkiewicz", "Pękalski",
                              "Sznajd-Weron", "van der Berg", "Gopikrishnan"};
    const char* givens[] = {"H.E.", "D", "Marcel", "Ch.", "A. M.", "KSW", "j.m.", ""};
    for (int i = 0; i < 500; ++i) {
        std::string s = surnames[rng.next_below(8)];
        std::string g = givens[rng.next_below(8)];
        std::string raw = rng.next_double() < 0.5 ? (s + ", " + g) : (g + " " + s);
        std::string once = normalize_name(raw);
        CHECK(normalize_name(once) == once);
    }
}

TEST_CASE("canonicalize resolves misprints through the alias map") {
    AliasMap aliases;
    aliases.add("S. Buldryev", "S. Buldyrev");
    aliases.add("F. Starr", "F.W. Starr");
    // misprint written in comma form still hits the alias
    CHECK(canonicalize("Buldryev, S.", aliases).canonical_name == "S. Buldyrev");
    CHECK(canonicalize("F. Starr", aliases).canonical_name == "F.W. Starr");
    CHECK(canonicalize("M. Ausloos", aliases).canonical_name == "M. Ausloos");
}

TEST_CASE("canonicalize is idempotent and never merges without an alias") {
    AliasMap aliases;
    aliases.add("S. Buldryev", "S. Buldyrev");
    auto once = canonicalize("Buldryev, S.", aliases);
    CHECK(canonicalize(once.canonical_name, aliases).canonical_name == once.canonical_name);
    // no fuzzy merging: a one-letter misprint without an alias stays distinct
    CHECK(canonicalize("S. Buldirev", aliases).canonical_name == "S. Buldirev");
}

TEST_CASE("alias map loads from text and rejects chains") {
    std::istringstream good("# corrections\nS. Buldryev -> S. Buldyrev\n\nF. Starr -> F.W. Starr\n");
    AliasMap m = AliasMap::from_stream(good, "aliases.txt");
    CHECK(m.size() == 2);
    CHECK(canonicalize("F. Starr", m).canonical_name == "F.W. Starr");

    std::istringstream chain("A. One -> B. Two\nB. Two -> C. Three\n");
    CHECK_THROWS_AS(AliasMap::from_stream(chain), InvalidInput);

    std::istringstream self("A. One -> B. Two\nB. Two -> B. Two\n");
    CHECK_NOTHROW(AliasMap::from_stream(self));

    std::istringstream bad("no arrow here\n");
    CHECK_THROWS_AS(AliasMap::from_stream(bad), InvalidInput);
}

TEST_CASE("suggest_aliases finds close surnames with compatible initials") {
    auto s = suggest_aliases({"S. Buldyrev", "S. Buldryev"}, 2);
    REQUIRE(s.size() == 1);
    CHECK(s[0].distance == 2);
    CHECK(s[0].name_a == "S. Buldryev");
    CHECK(s[0].name_b == "S. Buldyrev");
}

TEST_CASE("suggest_aliases protects homonyms with conflicting initials") {
    CHECK(suggest_aliases({"Ch. Laurent", "Ph. Laurent"}, 2).empty());
}

TEST_CASE("suggest_aliases matches missing middle initials at distance 0") {
    auto starr = suggest_aliases({"F.W. Starr", "F. Starr"}, 2);
    REQUIRE(starr.size() == 1);
    CHECK(starr[0].distance == 0);
    auto petersen = suggest_aliases({"A. Petersen", "A.M. Petersen"}, 2);
    REQUIRE(petersen.size() == 1);
    CHECK(petersen[0].distance == 0);
}

TEST_CASE("suggest_aliases edge cases") {
    CHECK(suggest_aliases({"M. Ausloos"}, 2).empty());
    CHECK(suggest_aliases({}, 2).empty());
    CHECK_THROWS_AS(suggest_aliases({"A. One", "B. Two"}, 0), UsageError);
    // same list in any order gives the same sorted output
    auto a = suggest_aliases({"S. Buldyrev", "S. Buldryev", "F. Starr", "F.W. Starr"}, 2);
    auto b = suggest_aliases({"F.W. Starr", "S. Buldryev", "F. Starr", "S. Buldyrev"}, 2);
    CHECK(a == b);
}

TEST_CASE("diacritics fold for comparison but stay in display names") {
    CHECK(canonicalize("J. Miśkiewicz").canonical_name == "J. Miśkiewicz");
    auto s = suggest_aliases({"J. Miśkiewicz", "J. Miskiewicz"}, 2);
    REQUIRE(s.size() == 1);
    CHECK(s[0].distance == 0);  // surnames identical after folding
}
