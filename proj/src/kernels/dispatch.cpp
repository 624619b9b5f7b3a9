#include <cstdlib>
#include <string>

#include "plrkit/errors.hpp"
#include "plrkit/kernels.hpp"

namespace plrkit::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) throw InputError("kernel variant not supported on this CPU: " + std::string(to_string(isa)));
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::avx2) return avx2::kTable;
#endif
  return scalar::kTable;
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("PLRKIT_KERNELS");
    if (env != nullptr && std::string(env) == "scalar") return scalar::kTable;
    return supported(Isa::avx2) ? table(Isa::avx2) : scalar::kTable;
  }();
  return chosen;
}

}  // namespace plrkit::kernels
