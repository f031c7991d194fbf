#pragma once

namespace fogsched {

// Selects between the OpenMP kernel and its serial reference. Both produce
// identical results; the serial path exists for testing and benchmarking.
enum class Execution { Serial, Parallel };

}  // namespace fogsched
