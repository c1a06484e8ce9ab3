// Frozen reference values elsewhere are tied to these exact bytes.
#include <gtest/gtest.h>

#include <cstdint>

#include "gne/game_io.hpp"

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fixture_hash(const std::string& name) {
    return fnv1a(gne::read_text_file(std::string(GNE_FIXTURE_DIR) + "/" + name));
}

}  // namespace

TEST(Fixtures, BytesAreFrozen) {
    EXPECT_EQ(fixture_hash("paper_example.json"), 0xbb3970a6eafb56c8ULL);
    EXPECT_EQ(fixture_hash("three_player.json"), 0x77b7ab28cafdcedeULL);
    EXPECT_EQ(fixture_hash("single_scalar.json"), 0xd1d5a5fbd090c971ULL);
    EXPECT_EQ(fixture_hash("infeasible.json"), 0x58f844f0ea1b113eULL);
    EXPECT_EQ(fixture_hash("well_conditioned.json"), 0x48e9b92b9986fff8ULL);
}
