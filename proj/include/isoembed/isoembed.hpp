#pragma once

#include "isoembed/baselines.hpp"
#include "isoembed/bounds.hpp"
#include "isoembed/core.hpp"
#include "isoembed/dual_ascent.hpp"
#include "isoembed/simplex.hpp"
#include "isoembed/spectral.hpp"
#include "isoembed/types.hpp"
