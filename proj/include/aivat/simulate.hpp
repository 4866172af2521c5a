#ifndef AIVAT_SIMULATE_HPP
#define AIVAT_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aivat/game.hpp"
#include "aivat/hands.hpp"

namespace aivat {

// Converts one Kuhn or Leduc terminal history into a corpus hand record.
HandHistory hand_from_kuhn(const History& z, const std::string& id);
HandHistory hand_from_leduc(const History& z, const std::string& id);

// Plays `num_hands` seeded hands of "kuhn" or "leduc" under the uniform
// profile and returns them as corpus records. Hand t uses seed (seed, t).
std::vector<HandHistory> simulate_corpus(const std::string& game_name,
                                         std::size_t num_hands, std::uint64_t seed);

}  // namespace aivat

#endif  // AIVAT_SIMULATE_HPP
