#pragma once

#include "fracsched/chromatic.hpp"
#include "fracsched/errors.hpp"
#include "fracsched/filter.hpp"
#include "fracsched/harness.hpp"
#include "fracsched/link_set.hpp"
#include "fracsched/matching.hpp"
#include "fracsched/network.hpp"
#include "fracsched/network_io.hpp"
#include "fracsched/pcg64.hpp"
#include "fracsched/rational.hpp"
#include "fracsched/result_io.hpp"
#include "fracsched/schedule.hpp"
#include "fracsched/simplex.hpp"
