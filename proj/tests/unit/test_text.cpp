#include "wander/text.hpp"

#include <doctest.h>

using namespace wander;

TEST_CASE("normalize folds case, strips punctuation and collapses whitespace")
{
    CHECK(text::normalize("  The   Birth of VENUS!  ") == "the birth of venus");
    CHECK(text::normalize("Impression, Sunrise") == "impression sunrise");
    CHECK(text::normalize("“Mona Lisa”") == "mona lisa");
    CHECK(text::normalize("Les Demoiselles d'Avignon") == "les demoiselles davignon");
    CHECK(text::normalize("") == "");
}

TEST_CASE("normalize applies full Unicode case folding")
{
    CHECK(text::normalize("ÉCOLE") == "école");
    CHECK(text::normalize("STRASSE") == text::normalize("straße"));
    CHECK(text::normalize("ΣΟΦΙΑ") == text::normalize("σοφια"));
}

TEST_CASE("find_word matches whole words only")
{
    CHECK(text::find_word("the scream and the kiss", "the kiss") == 15);
    CHECK(text::find_word("screaming", "scream") == std::string::npos);
    CHECK(text::find_word("a kiss", "") == std::string::npos);
}

TEST_CASE("sentences split on terminal punctuation followed by space")
{
    auto s = text::sentences("Sure! Follow me. We are 3.5 m away?  Yes");
    REQUIRE(s.size() == 4);
    CHECK(s[0] == "Sure!");
    CHECK(s[1] == "Follow me.");
    CHECK(s[2] == "We are 3.5 m away?");
    CHECK(s[3] == "Yes");
    CHECK(text::sentences("   ").empty());
}

TEST_CASE("prompt formatting helpers")
{
    CHECK(text::format_point(18, 2) == "(18.0, 2.0)");
    CHECK(text::format_point(-19.84, 1.36, 17.32) == "(-19.8, 1.4, 17.3)");
    CHECK(text::format_list({"painting 005", "painting 003"}) == "['painting 005', 'painting 003']");
    CHECK(text::format_list({}) == "[]");
    CHECK(text::trim("\t x \n") == "x");
    CHECK(text::is_blank(" \n"));
    CHECK_FALSE(text::is_blank(" a "));
}
