#include <doctest.h>

#include <cstdlib>

#include "dmsim/types.hpp"

using namespace dmsim;

TEST_SUITE("types") {

TEST_CASE("ceil_div rounds up") {
    CHECK(ceil_div(0, 3) == 0);
    CHECK(ceil_div(1, 3) == 1);
    CHECK(ceil_div(3, 3) == 1);
    CHECK(ceil_div(4, 3) == 2);
    CHECK(ceil_div(4096, 4096) == 1);
    CHECK(ceil_div(4097, 4096) == 2);
}

TEST_CASE("ceil_log2") {
    CHECK(ceil_log2(0) == 0);
    CHECK(ceil_log2(1) == 0);
    CHECK(ceil_log2(2) == 1);
    CHECK(ceil_log2(3) == 2);
    CHECK(ceil_log2(4) == 2);
    CHECK(ceil_log2(5) == 3);
    CHECK(ceil_log2(8) == 3);
    CHECK(ceil_log2(9) == 4);
    CHECK(ceil_log2(16) == 4);
    CHECK(ceil_log2(17) == 5);
    CHECK(ceil_log2(1024) == 10);
}

TEST_CASE("page arithmetic") {
    CHECK(page_of(0) == 0);
    CHECK(page_of(4095) == 0);
    CHECK(page_of(4096) == 1);
    CHECK(page_offset_of(4096 + 129) == 129);
    CHECK((0xdeadbeefULL & kLineMask) == 0xdeadbec0ULL);
    CHECK(kPageBytes / kCacheLineBytes == 64);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, 0.5, 0.1, 216.72, 1.0 / 3.0, 1e-9, 12345678.875}) {
        std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("cycle length") {
    // 1.2GHz clock, truncated to whole picoseconds.
    CHECK(kCyclePs == 833);
}

} // TEST_SUITE
