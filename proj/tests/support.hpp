#pragma once

#include <string>

#include "gne/game_io.hpp"

namespace gne::test {

inline QuadraticGame fixture(const std::string& name) {
    return load_game(std::string(GNE_FIXTURE_DIR) + "/" + name + ".json");
}

inline const char* const kAllFixtures[] = {"paper_example", "three_player", "single_scalar", "infeasible",
                                           "well_conditioned"};

}  // namespace gne::test
