#include "unitriwalk/fp.hpp"

namespace utw {

bool is_prime(std::uint32_t m) {
    if (m < 2) return false;
    if (m < 4) return true;
    if (m % 2 == 0) return false;
    for (std::uint32_t d = 3; d * d <= m; d += 2) {
        if (m % d == 0) return false;
    }
    return true;
}

void require_prime(std::uint32_t q) {
    if (!is_prime(q)) {
        throw InvalidArgument("modulus must be prime, got " + std::to_string(q));
    }
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t q) {
    a %= q;
    if (a == 0) throw InvalidArgument("inverse of zero mod " + std::to_string(q));
    // extended Euclid on (a, q); q prime so gcd = 1
    std::int64_t r0 = a, r1 = q;
    std::int64_t s0 = 1, s1 = 0;
    while (r1 != 0) {
        std::int64_t k = r0 / r1;
        std::int64_t r2 = r0 - k * r1;
        std::int64_t s2 = s0 - k * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    std::int64_t inv = s0 % static_cast<std::int64_t>(q);
    if (inv < 0) inv += q;
    return static_cast<std::uint32_t>(inv);
}

Fp::Fp(std::uint32_t value, std::uint32_t modulus) : v(value % modulus), q(modulus) {
    require_prime(modulus);
}

static void require_same_modulus(Fp x, Fp y) {
    if (x.q != y.q) {
        throw InvalidArgument("modulus mismatch: " + std::to_string(x.q) + " vs " + std::to_string(y.q));
    }
}

Fp fp_add(Fp x, Fp y) {
    require_same_modulus(x, y);
    return Fp((x.v + y.v) % x.q, x.q);
}

Fp fp_mul(Fp x, Fp y) {
    require_same_modulus(x, y);
    return Fp(static_cast<std::uint32_t>((static_cast<std::uint64_t>(x.v) * y.v) % x.q), x.q);
}

Fp fp_neg(Fp x) { return Fp((x.q - x.v) % x.q, x.q); }

Fp fp_inv(Fp x) { return Fp(inv_mod(x.v, x.q), x.q); }

} // namespace utw
