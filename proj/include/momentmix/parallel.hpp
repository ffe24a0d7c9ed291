#pragma once

namespace momentmix {

/// Selects between the OpenMP kernel and its single-threaded execution.
enum class Exec { serial, parallel };

/// Applies the MOMENTMIX_THREADS cap (if set) to the OpenMP pool and returns
/// the resulting thread count.
int configure_threads_from_env();

int max_threads() noexcept;

}  // namespace momentmix
