#pragma once

#include "steklov/bound.hpp"
#include "steklov/decomposition.hpp"
#include "steklov/error.hpp"
#include "steklov/flows.hpp"
#include "steklov/generators.hpp"
#include "steklov/graph.hpp"
#include "steklov/metric.hpp"
#include "steklov/report.hpp"
#include "steklov/scaling.hpp"
#include "steklov/spectrum.hpp"
