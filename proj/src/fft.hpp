#pragma once

#include <complex>
#include <vector>

namespace errinvar::detail {

// Unnormalized in-place DFT. forward: sum z_g e^{-2 pi i k g / n}; otherwise +.
void fft_inplace(std::vector<std::complex<double>>& data, bool forward);

}  // namespace errinvar::detail
