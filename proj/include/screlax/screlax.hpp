#pragma once

#include "screlax/core.hpp"
#include "screlax/barrier_calculus.hpp"
#include "screlax/body.hpp"
#include "screlax/hull.hpp"
#include "screlax/relaxation.hpp"
#include "screlax/admissibility.hpp"
#include "screlax/io.hpp"
#include "screlax/svg.hpp"
