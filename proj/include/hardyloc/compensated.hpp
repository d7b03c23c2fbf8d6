#pragma once

// Double-double accumulator (Knuth TwoSum). Prefix tables built from these
// give cube sums that are correctly rounded in all but pathological cases,
// so windowed averages do not depend on where the window sits.

namespace hardyloc {

struct DD {
  double hi = 0.0;
  double lo = 0.0;

  static DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
  }

  DD& operator+=(double x) {
    DD t = two_sum(hi, x);
    t.lo += lo;
    *this = two_sum(t.hi, t.lo);
    return *this;
  }

  DD& operator+=(const DD& o) {
    DD t = two_sum(hi, o.hi);
    t.lo += lo + o.lo;
    *this = two_sum(t.hi, t.lo);
    return *this;
  }

  DD operator-() const { return {-hi, -lo}; }

  friend DD operator+(DD a, const DD& b) { return a += b; }
  friend DD operator-(DD a, const DD& b) { return a += -b; }

  double value() const { return hi + lo; }
};

}  // namespace hardyloc
