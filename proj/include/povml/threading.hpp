#pragma once

namespace povml {

// Process-wide worker count for the OpenMP kernels. Defaults to the machine
// core count; the CLI sets it from --threads / POVML_THREADS. Always >= 1.
int thread_count();
void set_thread_count(int n);

}  // namespace povml
