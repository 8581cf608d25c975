#pragma once

// Shared test-side oracles, implemented independently of the library so the
// suites check against separately-derived values.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace testsupport {

// Regularized upper incomplete gamma Q(a, x): series for small x, modified
// Lentz continued fraction otherwise. Used for chi-square p-values.
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) return std::nan("");
    if (x == 0.0) return 1.0;
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(log_prefix);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(log_prefix) * h;
}

inline double chi2_p_value(double chi2, double dof) {
    return gamma_q(dof / 2.0, chi2 / 2.0);
}

// Zipf pmf over [1, n] with exponent theta, normalized by a directly summed
// generalized harmonic number.
inline double zipf_harmonic(std::uint64_t n, double theta) {
    double sum = 0.0, comp = 0.0; // Kahan
    for (std::uint64_t k = n; k >= 1; --k) {
        const double term = std::pow(static_cast<double>(k), -theta);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline double zipf_pmf(std::uint64_t k, std::uint64_t n, double theta) {
    return std::pow(static_cast<double>(k), -theta) / zipf_harmonic(n, theta);
}

inline double chi2_stat(const std::vector<std::uint64_t>& counts,
                        const std::vector<double>& probs, double n_draws) {
    double chi2 = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double expected = probs[k] * n_draws;
        const double diff = static_cast<double>(counts[k]) - expected;
        chi2 += diff * diff / expected;
    }
    return chi2;
}

struct TwoPass {
    double mean = 0.0;
    double sd = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

inline TwoPass two_pass_stats(const std::vector<double>& xs) {
    TwoPass r;
    if (xs.empty()) return r;
    double sum = 0.0;
    for (double x : xs) sum += x;
    r.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.sd = xs.size() >= 2 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    const double half = 1.96 * r.sd / std::sqrt(static_cast<double>(xs.size()));
    r.ci_low = r.mean - half;
    r.ci_high = r.mean + half;
    return r;
}

inline double pearson(const std::vector<double>& xs,
                      const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Minimal XML well-formedness scan good enough for generated SVG: balanced,
// properly nested tags, quoted attribute text, no stray angle brackets.
inline bool xml_well_formed(const std::string& s) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '>') return false;
        if (s[i] != '<') {
            ++i;
            continue;
        }
        if (s.compare(i, 4, "<!--") == 0) {
            const std::size_t end = s.find("-->", i + 4);
            if (end == std::string::npos) return false;
            i = end + 3;
            continue;
        }
        if (s.compare(i, 2, "<?") == 0) {
            const std::size_t end = s.find("?>", i + 2);
            if (end == std::string::npos) return false;
            i = end + 2;
            continue;
        }
        std::size_t j = i + 1;
        bool in_quote = false;
        char quote = 0;
        while (j < s.size()) {
            const char c = s[j];
            if (in_quote) {
                if (c == quote) in_quote = false;
            } else if (c == '"' || c == '\'') {
                in_quote = true;
                quote = c;
            } else if (c == '>') {
                break;
            } else if (c == '<') {
                return false;
            }
            ++j;
        }
        if (j >= s.size() || in_quote) return false;
        std::string tag = s.substr(i + 1, j - i - 1);
        i = j + 1;
        if (tag.empty()) return false;
        if (tag[0] == '/') {
            const std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else {
            const bool self_closing = tag.back() == '/';
            if (self_closing) tag.pop_back();
            const std::string name = tag.substr(0, tag.find_first_of(" \t\r\n"));
            if (name.empty()) return false;
            if (!self_closing) stack.push_back(name);
        }
    }
    return stack.empty();
}

inline std::size_t count_occurrences(const std::string& hay,
                                     const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

} // namespace testsupport
