#ifndef DOILAB_SRC_FFT2_HPP
#define DOILAB_SRC_FFT2_HPP

#include <unsupported/Eigen/FFT>

#include "doilab/linalg.hpp"

namespace doilab::detail {

/// In-place 2D DFT over columns then rows. Inverse is scaled by 1/(rows*cols).
inline void fft2(CMatrix& data, bool inverse) {
  Eigen::FFT<double> fft;
  CVector in;
  CVector out;
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    in = data.col(j);
    if (inverse) fft.inv(out, in); else fft.fwd(out, in);
    data.col(j) = out;
  }
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    in = data.row(i).transpose();
    if (inverse) fft.inv(out, in); else fft.fwd(out, in);
    data.row(i) = out.transpose();
  }
}

}  // namespace doilab::detail

#endif  // DOILAB_SRC_FFT2_HPP
