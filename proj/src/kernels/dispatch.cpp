#include <atomic>

#include "phylokit/kernels.hpp"

namespace phylokit::kernels {
namespace {

const KernelTable* pick() {
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{pick()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void force_backend(Backend backend) {
  const KernelTable* t = &scalar_kernels();
  if (backend == Backend::kAvx2 && avx2_kernels() != nullptr) t = avx2_kernels();
  slot().store(t, std::memory_order_release);
}

Backend detected_backend() { return pick()->backend; }

const char* backend_name(Backend backend) {
  return backend == Backend::kAvx2 ? "avx2" : "scalar";
}

}  // namespace phylokit::kernels
