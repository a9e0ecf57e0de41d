#pragma once

#include <string>
#include <vector>

#include "collarb/model_io.hpp"

namespace collarb {

/// Named reference models: fig1, twin-complete, ca-pair, zero-market.
std::vector<std::string> fixture_names();
/// Throws InputError for an unknown name.
ModelDocument make_fixture(const std::string& name);

ModelDocument fixture_fig1();
ModelDocument fixture_twin_complete();
ModelDocument fixture_ca_pair();
ModelDocument fixture_zero_market();

/// Two-agent exchange set of all zero-sum pairs measurable for `partition`:
/// generators (1_a, −1_a), one per atom.
ExchangeSpace zero_sum_pairs(const Partition& partition, std::size_t num_outcomes);

}  // namespace collarb
