#include "csperiod/numtheory.hpp"

#include <cstdlib>
#include <numeric>
#include <string>

namespace csp {

namespace {

// True if |m| is square-free (trial division).
bool squarefree(long m) {
  unsigned long n = static_cast<unsigned long>(m < 0 ? -m : m);
  if (n == 0) return false;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

long mod4(long x) { return ((x % 4) + 4) % 4; }
long mod8(long x) { return ((x % 8) + 8) % 8; }

}  // namespace

Discriminant Discriminant::validate(long D) {
  if (D >= 0)
    throw InvalidInput("not a valid discriminant: must be negative, got " +
                       std::to_string(D));
  long r = mod4(D);
  if (r != 0 && r != 1)
    throw InvalidInput("not a valid discriminant: " + std::to_string(D) +
                       " is 2 or 3 mod 4");
  if (r == 1) {
    if (!squarefree(D))
      throw InvalidInput("not a valid discriminant: " + std::to_string(D) +
                         " is 1 mod 4 but not square-free");
  } else {
    long m = D / 4;
    long rm = mod4(m);
    if (rm != 2 && rm != 3)
      throw InvalidInput("not a valid discriminant: " + std::to_string(D) +
                         " = 4m with m not 2 or 3 mod 4");
    if (!squarefree(m))
      throw InvalidInput("not a valid discriminant: " + std::to_string(D) +
                         " = 4m with m not square-free");
  }
  return Discriminant(D);
}

int kronecker(long a, long n) {
  // (a|0) is 1 iff a = ±1
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int sign = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) sign = -sign;  // (a|-1) = -1 for a < 0
  }
  // factor out twos from n: (a|2) = 0 if a even, +1 if a ≡ ±1 (mod 8),
  // -1 if a ≡ ±3 (mod 8)
  int two_count = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++two_count;
  }
  if (two_count > 0) {
    if (a % 2 == 0) return 0;
    long am8 = mod8(a);
    if ((am8 == 3 || am8 == 5) && (two_count % 2 == 1)) sign = -sign;
  }
  // now n odd positive; standard Jacobi loop with reciprocity
  long aa = a % n;
  if (aa < 0) aa += n;
  while (aa != 0) {
    while (aa % 2 == 0) {
      aa /= 2;
      long nm8 = mod8(n);
      if (nm8 == 3 || nm8 == 5) sign = -sign;
    }
    std::swap(aa, n);
    if (mod4(aa) == 3 && mod4(n) == 3) sign = -sign;
    aa %= n;
  }
  if (n != 1) return 0;  // gcd(a, n) > 1
  return sign;
}

int form_class_count(long D) {
  if (D >= 0 || (mod4(D) != 0 && mod4(D) != 1))
    throw InvalidInput("form count needs D < 0 with D = 0,1 mod 4");
  unsigned long absD = static_cast<unsigned long>(-D);
  int h = 0;
  for (long a = 1; 3 * a * a <= static_cast<long>(absD); ++a) {
    for (long b = -a; b <= a; ++b) {
      // c = (b^2 + |D|)/(4a) must be integral (forces b ≡ D mod 2 too)
      long num = b * b + static_cast<long>(absD);
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if ((b < 0) && (b == -a || a == c)) continue;  // avoid double count
      long g = std::gcd(std::gcd(std::labs(a), std::labs(b)), std::labs(c));
      if (g != 1) continue;
      ++h;
    }
  }
  return h;
}

int class_number(const Discriminant& D) { return form_class_count(D.value()); }

}  // namespace csp
