#include "multavg/series.hpp"

#include <sstream>

#include "multavg/errors.hpp"

namespace multavg {

Sequence Sequence::zero() {
    return Sequence([](std::int64_t) { return 0.0; }, std::numeric_limits<std::int64_t>::max());
}

double Sequence::operator()(std::int64_t n) const {
    if (n < 1 || n > limit_) {
        std::ostringstream msg;
        msg << "sequence evaluated at " << n << " outside its range [1, " << limit_ << "]";
        throw RangeError(msg.str());
    }
    return fn_(n);
}

Sequence Sequence::operator-() const {
    return Sequence([fn = fn_](std::int64_t n) { return -fn(n); }, limit_);
}

Sequence operator+(const Sequence& a, const Sequence& b) {
    return Sequence([fa = a.fn_, fb = b.fn_](std::int64_t n) { return fa(n) + fb(n); },
                    std::min(a.limit_, b.limit_));
}

Complex renormalization_factor(std::int64_t N, double t, const Sequence& w) {
    return std::polar(1.0, -(t * std::log(static_cast<double>(N)) + w(N)));
}

Stabilization diagnose_stabilization(std::span<const std::int64_t> checkpoints, std::span<const Complex> values,
                                     double tolerance) {
    if (checkpoints.size() != values.size())
        throw InvalidArgument("diagnose_stabilization: checkpoint/value length mismatch");
    Stabilization s;
    if (values.empty()) return s;
    const std::size_t n = values.size();
    const std::size_t tail = n >= 3 ? n - 3 : 0;
    s.last_three_width = oscillation_width(values.subspan(tail));
    const std::int64_t cutoff = checkpoints.back() / 10;
    std::size_t first = 0;
    while (first < n && checkpoints[first] < cutoff) ++first;
    s.last_decade_width = oscillation_width(values.subspan(first));
    s.stabilized = n >= 3 && s.last_three_width < tolerance;
    return s;
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t base, std::size_t count) {
    if (base < 1) throw InvalidArgument("geometric_checkpoints: base must be >= 1");
    std::vector<std::int64_t> out;
    std::int64_t n = base;
    for (std::size_t k = 0; k < count; ++k, n *= 2) out.push_back(n);
    return out;
}

} // namespace multavg
