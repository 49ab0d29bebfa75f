#pragma once

namespace axibouss {

/// Caps internal data parallelism. Reads AXIBOUSS_THREADS on first use;
/// `set_thread_cap(0)` restores the environment/default value.
void set_thread_cap(int threads);
int thread_cap();

} // namespace axibouss
