#pragma once

#include <cstdint>

#include "unitriwalk/errors.hpp"

namespace utw {

bool is_prime(std::uint32_t m);

// Throws InvalidArgument unless q is prime (trial division).
void require_prime(std::uint32_t q);

// a^{-1} mod q by extended Euclid; a must be nonzero mod q.
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t q);

// Scalar in Z_q for prime q. Carries its modulus; mixing moduli is an error.
struct Fp {
    std::uint32_t v = 0;
    std::uint32_t q = 2;

    Fp() = default;
    Fp(std::uint32_t value, std::uint32_t modulus);

    bool operator==(const Fp&) const = default;
};

Fp fp_add(Fp x, Fp y);
Fp fp_mul(Fp x, Fp y);
Fp fp_neg(Fp x);
Fp fp_inv(Fp x); // throws InvalidArgument on zero

} // namespace utw
