#pragma once

#include "simsr/error.hpp"
#include "simsr/bitset.hpp"
#include "simsr/partition.hpp"
#include "simsr/lattice.hpp"
#include "simsr/lattice_enum.hpp"
#include "simsr/semiring.hpp"
#include "simsr/semiring_iso.hpp"
#include "simsr/endo.hpp"
#include "simsr/semimodule.hpp"
#include "simsr/io.hpp"
#include "simsr/catalog.hpp"
