#pragma once

#include "tinytnas/arch.hpp"
#include "tinytnas/data.hpp"
#include "tinytnas/nn.hpp"
#include "tinytnas/profiler.hpp"
#include "tinytnas/report.hpp"
#include "tinytnas/search.hpp"
