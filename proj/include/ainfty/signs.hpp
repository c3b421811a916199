#pragma once

#include <vector>

namespace ainfty {

using Degree = int;

inline int parity_sign(long long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

/// Sign of the term m_k(a_1,..,a_j, m_l(..), ..) in the unsuspended
/// A-infinity relation: (-1)^((j+1)(l+1) + l(|a_1|+...+|a_j|)).
inline int sign_unsuspended(int j, int l, const std::vector<Degree>& prefix_degrees)
{
    long long s = 0;
    for (Degree d : prefix_degrees)
        s += d;
    long long star = static_cast<long long>(j + 1) * (l + 1) + static_cast<long long>(l) * s;
    return parity_sign(star);
}

/// Sign of the corresponding suspended term: (-1)^(|a_1|+...+|a_j|) in
/// suspended degrees.  Also the sign on the right hand side of the
/// functor relation.
inline int sign_suspended(const std::vector<Degree>& prefix_degrees)
{
    long long s = 0;
    for (Degree d : prefix_degrees)
        s += d;
    return parity_sign(s);
}

/// Sign relating the two presentations of an arity-k product:
///   b_k(s a_1,...,s a_k) = (-1)^star s m_k(a_1,...,a_k),
///   star = (k-1)|s a_1| + (k-2)|s a_2| + ... + |s a_{k-1}|.
/// Takes the suspended degrees |s a_i| = |a_i| - 1; the last entry does not
/// enter the formula.
inline int suspension_sign(int k, const std::vector<Degree>& suspended_degrees)
{
    long long star = 0;
    for (int i = 0; i + 1 < k; ++i)
        star += static_cast<long long>(k - 1 - i) * suspended_degrees[static_cast<size_t>(i)];
    return parity_sign(star);
}

}  // namespace ainfty
