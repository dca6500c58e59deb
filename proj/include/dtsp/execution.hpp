#pragma once

namespace dtsp {

// Serial runs the reference single-threaded loops; Parallel enables the
// OpenMP kernels. Both produce bit-identical results for the same seed.
enum class Execution {
    Serial,
    Parallel,
};

} // namespace dtsp
