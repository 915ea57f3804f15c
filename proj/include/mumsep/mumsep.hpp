#pragma once

// Umbrella header.

#include "mumsep/assignment.hpp"
#include "mumsep/criteria.hpp"
#include "mumsep/errors.hpp"
#include "mumsep/io.hpp"
#include "mumsep/mum.hpp"
#include "mumsep/opalg.hpp"
#include "mumsep/rng.hpp"
#include "mumsep/states.hpp"
#include "mumsep/workflows.hpp"
