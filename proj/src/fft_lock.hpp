#pragma once

#include <mutex>

namespace pinlab::detail {

// The FFTW planner is not re-entrant; executing existing plans is.
std::mutex& fftw_planner_mutex();

}  // namespace pinlab::detail
