#pragma once

#include "fairdiv/chores_alloc.hpp"
#include "fairdiv/checkers.hpp"
#include "fairdiv/fixtures.hpp"
#include "fairdiv/goods_alloc.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/mms.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/rational.hpp"
#include "fairdiv/reduction.hpp"
#include "fairdiv/surd.hpp"
