#pragma once

// Umbrella header.

#include "cyclic.hpp"
#include "designs.hpp"
#include "diff_families.hpp"
#include "errors.hpp"
#include "groups.hpp"
#include "hypergraph.hpp"
#include "matching.hpp"
#include "outcome.hpp"
#include "search.hpp"
