#pragma once

namespace bvg {

/// Upper bound on worker threads used by the data-parallel passes. Results do
/// not depend on it. Defaults to the OpenMP runtime's maximum.
int thread_count();
void set_thread_count(int n);

}  // namespace bvg
