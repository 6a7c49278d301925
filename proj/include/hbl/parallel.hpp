#pragma once

namespace hbl {

/// How a data-parallel kernel is executed. Every kernel derives one random
/// stream per task index, so the serial and OpenMP paths produce identical
/// results for any thread count.
struct Execution {
  bool parallel = false;
  int threads = 0;  // 0 = OpenMP default

  static Execution serial() { return {}; }
  static Execution omp(int threads = 0) { return {true, threads}; }
};

/// Resolves a requested thread count; values <= 0 map to omp_get_max_threads().
int resolve_threads(int requested);

}  // namespace hbl
