#pragma once

// Umbrella header: exact integer matrices, Hermite and Smith normal forms
// with transforms, constructive homology, and the benchmark generator.

#include "kbnf/integer.hpp"
#include "kbnf/matrix.hpp"
#include "kbnf/matrix_io.hpp"
#include "kbnf/oracles.hpp"
#include "kbnf/bezout.hpp"
#include "kbnf/hermite.hpp"
#include "kbnf/smith.hpp"
#include "kbnf/homology.hpp"
#include "kbnf/benchgen.hpp"
