#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "camp/common.hpp"
#include "camp/csv.hpp"

using namespace camp;

TEST(FormatDouble, RoundTripsRandomValues) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double v = d(gen);
        EXPECT_EQ(parse_double(format_double(v), "v"), v);
    }
}

TEST(FormatDouble, NegativeZeroPrintsAsZero) {
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(235.0), "235");
}

TEST(ParseNumbers, RejectTrailingGarbage) {
    EXPECT_THROW((void)parse_int("12x", "f"), ValidationError);
    EXPECT_THROW((void)parse_double("nan", "f"), ValidationError);
    EXPECT_THROW((void)parse_double("", "f"), ValidationError);
    EXPECT_EQ(parse_int("-4", "f"), -4);
}

TEST(Fnv, KnownVectors) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(DeriveSeed, StreamsDiffer) {
    EXPECT_NE(derive_seed(42, 0), derive_seed(42, 1));
    EXPECT_NE(derive_seed(42, 0), derive_seed(43, 0));
    EXPECT_EQ(derive_seed(42, 5), derive_seed(42, 5));
}

TEST(UnitUniform, StaysInHalfOpenInterval) {
    Rng rng(1);
    double lo = 1.0;
    double hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = unit_uniform(rng);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    EXPECT_LT(lo, 1e-3);
    EXPECT_GT(hi, 1.0 - 1e-3);
}

TEST(UniformIndex, CoversRange) {
    Rng rng(3);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) ++seen[uniform_index(rng, 7)];
    for (int c : seen) EXPECT_GT(c, 800);
}

TEST(Venue, ParseAndPrint) {
    EXPECT_EQ(parse_venue_class("Asia"), VenueClass::Asia);
    EXPECT_EQ(parse_venue_class("NonAsia"), VenueClass::NonAsia);
    EXPECT_FALSE(parse_venue_class("asia").has_value());
    EXPECT_EQ(to_string(VenueClass::NonAsia), "NonAsia");
}

TEST(Csv, SplitHandlesQuotesAndCr) {
    const auto f = csv::split_line("a,\"b,c\",\"d\"\"e\",\r");
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(f[1], "b,c");
    EXPECT_EQ(f[2], "d\"e");
    EXPECT_EQ(f[3], "");
}

TEST(Csv, JoinQuotesWhenNeeded) {
    EXPECT_EQ(csv::join({"a", "b,c", "q\""}), "a,\"b,c\",\"q\"\"\"");
    EXPECT_EQ(csv::split_line(csv::join({"x,y", "z"})), (std::vector<std::string>{"x,y", "z"}));
}

TEST(Csv, ReadChecksHeaderAndWidth) {
    std::istringstream ok("h1,h2\n1,2\n\n3,4\n");
    const auto rows = csv::read(ok, "t.csv", {"h1", "h2"});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].line, 4u);

    std::istringstream bad_header("h1,hX\n1,2\n");
    EXPECT_THROW((void)csv::read(bad_header, "t.csv", {"h1", "h2"}), ParseError);

    std::istringstream wide("h1,h2\n1,2,3\n");
    try {
        (void)csv::read(wide, "t.csv", {"h1", "h2"});
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.source(), "t.csv");
    }

    std::istringstream empty("");
    EXPECT_THROW((void)csv::read(empty, "t.csv", {"h1"}), ParseError);
}

TEST(Csv, ShortRowsAllowedDownToMinimum) {
    std::istringstream in("a,b,c\n1,2\n");
    const auto rows = csv::read(in, "t", {"a", "b", "c"}, 2);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].fields.size(), 3u);
    EXPECT_EQ(rows[0].fields[2], "");
}

TEST(Csv, AtomicWriteThenRead) {
    const auto dir = std::filesystem::temp_directory_path() / "camp_csv_test";
    std::filesystem::remove_all(dir);
    const auto p = dir / "sub" / "f.txt";
    csv::write_file_atomic(p, "hello\n");
    EXPECT_EQ(csv::read_file(p), "hello\n");
    EXPECT_FALSE(std::filesystem::exists(p.string() + ".tmp"));
    std::filesystem::remove_all(dir);
    EXPECT_THROW((void)csv::read_file(p), IoError);
}
