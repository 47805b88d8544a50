#pragma once

#include "frechet/geometry.hpp"
#include "frechet/predicates.hpp"
#include "frechet/freespace.hpp"
#include "frechet/encoding.hpp"
#include "frechet/digest.hpp"
#include "frechet/memo.hpp"
#include "frechet/blocked.hpp"
#include "frechet/distance.hpp"
#include "frechet/curve_io.hpp"
#include "frechet/generators.hpp"
#include "frechet/svg.hpp"
