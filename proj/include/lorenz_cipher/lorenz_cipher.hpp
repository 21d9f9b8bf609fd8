#pragma once

#include "lorenz_cipher/rational.hpp"
#include "lorenz_cipher/core_map.hpp"
#include "lorenz_cipher/bits.hpp"
#include "lorenz_cipher/cipher.hpp"
#include "lorenz_cipher/link_sim.hpp"
#include "lorenz_cipher/stat_tests.hpp"
#include "lorenz_cipher/reference_generators.hpp"
#include "lorenz_cipher/analysis.hpp"
#include "lorenz_cipher/config_file.hpp"
