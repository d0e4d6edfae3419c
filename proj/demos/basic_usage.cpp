// Evaluates a few bilateral values and checks one identity through the library API.

#include <cstdio>

#include "qultra/qultra.hpp"

int main() {
  using namespace qultra;
  const UltraParams params{0.8, 0.7, QBase(0.3)};
  const SpectralPoint z = SpectralPoint::from_theta(1.0);

  for (int n = -3; n <= 3; ++n) {
    const UltraValue v = bilateral_cn(n, z, params);
    std::printf("C_%+d = %.15f %+.15fi  (%d terms)\n", n, v.value.real(), v.value.imag(),
                v.truncation_terms);
  }

  const complex t = 0.6;
  const UltraValue sum = generating_sum(UltraKind::bilateral, t, z, params);
  const complex rhs = generating_rhs(UltraKind::bilateral, t, z, params);
  std::printf("generating function: series %.15f, product %.15f, |diff| %.2e\n", sum.value.real(),
              rhs.real(), std::abs(sum.value - rhs));

  std::printf("recurrence residual at n = 2: %.2e\n",
              recurrence_residual(UltraKind::bilateral, 2, z, params));
  return 0;
}
