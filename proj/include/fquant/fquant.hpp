#pragma once

#include "fquant/antichain.hpp"
#include "fquant/cylinder.hpp"
#include "fquant/error.hpp"
#include "fquant/estimates.hpp"
#include "fquant/fixtures.hpp"
#include "fquant/format.hpp"
#include "fquant/geometry.hpp"
#include "fquant/lloyd.hpp"
#include "fquant/measure.hpp"
#include "fquant/pipeline.hpp"
#include "fquant/pressure.hpp"
#include "fquant/quantize.hpp"
#include "fquant/rifs.hpp"
#include "fquant/separation.hpp"
#include "fquant/spec_io.hpp"
#include "fquant/word.hpp"
