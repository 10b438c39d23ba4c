#pragma once

#include <functional>

namespace liegan {

/// Worker cap: LIEGAN_THREADS when set (minimum 1), otherwise the hardware
/// concurrency. Read once per process.
int worker_cap();

/// Runs fn(row0, row1) over a row-partition of [0, rows). Each worker owns a
/// disjoint row range and no reductions cross workers, so results are
/// bit-identical for every thread count. Runs inline when the cap is 1 or
/// the range is small.
void parallel_rows(int rows, int min_rows_per_worker, const std::function<void(int, int)>& fn);

} // namespace liegan
