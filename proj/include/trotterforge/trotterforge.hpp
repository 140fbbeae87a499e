#pragma once

#include "common.hpp"
#include "hamlib.hpp"
#include "decomp.hpp"
#include "lowrank.hpp"
#include "circuit.hpp"
#include "blockenc.hpp"
#include "compilers.hpp"
#include "trotter.hpp"
#include "costmodel.hpp"
#include "bounds.hpp"
#include "chem.hpp"
