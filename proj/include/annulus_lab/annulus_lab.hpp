#pragma once

#include "annulus_lab/analysis.hpp"
#include "annulus_lab/caps.hpp"
#include "annulus_lab/dyadic.hpp"
#include "annulus_lab/energy.hpp"
#include "annulus_lab/errors.hpp"
#include "annulus_lab/kernel.hpp"
#include "annulus_lab/lattice.hpp"
#include "annulus_lab/parallel.hpp"
#include "annulus_lab/rng.hpp"
#include "annulus_lab/serialize.hpp"
#include "annulus_lab/stats.hpp"
#include "annulus_lab/svg.hpp"
