#ifndef UNCERT_SRC_FFT_HPP
#define UNCERT_SRC_FFT_HPP

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace uncert::detail {

// Unscaled transforms, X_k = sum_j x_j exp(-+2 pi i jk/n). A fresh plan per
// call keeps them reentrant.
inline Eigen::VectorXcd dft_forward(const Eigen::VectorXcd& in) {
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    Eigen::VectorXcd out(in.size());
    fft.fwd(out, in);
    return out;
}

inline Eigen::VectorXcd dft_backward(const Eigen::VectorXcd& in) {
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    Eigen::VectorXcd out(in.size());
    fft.inv(out, in);
    return out;
}

inline Eigen::Index next_pow2(Eigen::Index n) {
    Eigen::Index p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace uncert::detail

#endif // UNCERT_SRC_FFT_HPP
