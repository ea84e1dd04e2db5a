#pragma once

#include "zeic/bigmath.hpp"
#include "zeic/bounds.hpp"
#include "zeic/bpis.hpp"
#include "zeic/channel.hpp"
#include "zeic/coding.hpp"
#include "zeic/csv.hpp"
#include "zeic/errors.hpp"
#include "zeic/experiments.hpp"
#include "zeic/packing.hpp"
#include "zeic/rng.hpp"
#include "zeic/set_family.hpp"
#include "zeic/uniform.hpp"
#include "zeic/version.hpp"
