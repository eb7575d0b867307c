#include "ambient.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

namespace wph {

WeightedFamily::WeightedFamily(std::vector<std::int64_t> weights, std::int64_t degree)
    : weights_(std::move(weights)), degree_(degree)
{
    if (weights_.size() < 3)
        fail(ErrorCode::InvalidArgument,
             "a family needs at least 3 weights (dimension n >= 1)");
    if (weights_.size() > max_variables)
        fail(ErrorCode::InvalidArgument,
             "at most " + std::to_string(max_variables) + " weights are supported");
    for (auto w : weights_) {
        if (w < 1 || w > max_weight_value)
            fail(ErrorCode::InvalidArgument,
                 "weights must lie in [1, " + std::to_string(max_weight_value) + "]");
    }
    if (degree_ < 1 || degree_ > max_degree_value)
        fail(ErrorCode::InvalidArgument,
             "degree must lie in [1, " + std::to_string(max_degree_value) + "]");
    if (gcd_all(weights_) != 1)
        fail(ErrorCode::InvalidArgument, "weights must have gcd 1");
}

namespace {

std::int64_t parse_integer(std::string_view token)
{
    std::int64_t value = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        fail(ErrorCode::InvalidArgument, "not an integer: '" + std::string(token) + "'");
    return value;
}

} // namespace

WeightedFamily WeightedFamily::parse(std::string_view text)
{
    auto [weights, degree] = split_family_text(text);
    return WeightedFamily(std::move(weights), degree);
}

std::pair<std::vector<std::int64_t>, std::int64_t> split_family_text(std::string_view text)
{
    const auto dpos = text.find("d=");
    if (dpos == std::string_view::npos)
        fail(ErrorCode::InvalidArgument, "family text needs a 'd=<degree>' part");
    std::string_view head = text.substr(0, dpos);
    std::string_view tail = text.substr(dpos + 2);
    while (!tail.empty() && std::isspace(static_cast<unsigned char>(tail.back())))
        tail.remove_suffix(1);

    std::vector<std::int64_t> weights;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            weights.push_back(parse_integer(token));
            token.clear();
        }
    };
    for (char c : head) {
        if (c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            token.push_back(c);
    }
    flush();
    return {std::move(weights), parse_integer(tail)};
}

std::int64_t WeightedFamily::max_weight() const noexcept
{
    return *std::max_element(weights_.begin(), weights_.end());
}

bool WeightedFamily::all_weights_divide_degree() const noexcept
{
    return std::all_of(weights_.begin(), weights_.end(),
                       [&](std::int64_t w) { return degree_ % w == 0; });
}

bool WeightedFamily::all_weights_coprime_to_degree() const noexcept
{
    return std::all_of(weights_.begin(), weights_.end(),
                       [&](std::int64_t w) { return std::gcd(w, degree_) == 1; });
}

std::string WeightedFamily::to_string() const
{
    std::ostringstream out;
    for (std::size_t i = 0; i < weights_.size(); ++i)
        out << (i ? "," : "") << weights_[i];
    out << " d=" << degree_;
    return out.str();
}

std::int64_t Monomial::weighted_degree(const std::vector<std::int64_t>& weights) const
{
    if (weights.size() != e.size())
        fail(ErrorCode::InvalidArgument, "monomial and weights differ in length");
    std::int64_t total = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        total += weights[i] * static_cast<std::int64_t>(e[i]);
    return total;
}

std::uint32_t Monomial::total_degree() const noexcept
{
    return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

std::uint64_t Monomial::support_mask() const noexcept
{
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i])
            mask |= std::uint64_t{1} << i;
    }
    return mask;
}

std::string Monomial::to_string() const
{
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i])
            continue;
        if (!first)
            out << '*';
        first = false;
        out << 'x' << i;
        if (e[i] > 1)
            out << '^' << e[i];
    }
    if (first)
        out << '1';
    return out.str();
}

MonomialSystem::MonomialSystem(WeightedFamily family, std::vector<Monomial> monomials)
    : family_(std::move(family)), monomials_(std::move(monomials))
{
    for (const auto& m : monomials_) {
        if (m.e.size() != family_.size())
            fail(ErrorCode::InvalidArgument, "monomial length does not match the family");
        if (m.weighted_degree(family_.weights()) != family_.degree())
            fail(ErrorCode::InvalidArgument,
                 "monomial " + m.to_string() + " does not have degree "
                     + std::to_string(family_.degree()));
    }
    std::sort(monomials_.begin(), monomials_.end(), std::greater<>());
    monomials_.erase(std::unique(monomials_.begin(), monomials_.end()), monomials_.end());
}

bool MonomialSystem::contains(const Monomial& m) const
{
    return std::binary_search(monomials_.begin(), monomials_.end(), m, std::greater<>());
}

MonomialSystem MonomialSystem::merged(const MonomialSystem& other) const
{
    if (!(other.family_ == family_))
        fail(ErrorCode::InvalidArgument, "cannot merge systems of different families");
    auto all = monomials_;
    all.insert(all.end(), other.monomials_.begin(), other.monomials_.end());
    return MonomialSystem(family_, std::move(all));
}

bool well_formed(const WeightedFamily& fam)
{
    const auto& a = fam.weights();
    for (std::size_t skip = 0; skip < a.size(); ++skip) {
        std::int64_t g = 0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j != skip)
                g = std::gcd(g, a[j]);
        }
        if (g != 1)
            return false;
    }
    return true;
}

WeightedFamily well_form_normalize(const WeightedFamily& fam)
{
    auto a = fam.weights();
    auto d = fam.degree();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::int64_t g = 0;
            for (std::size_t j = 0; j < a.size(); ++j) {
                if (j != i)
                    g = std::gcd(g, a[j]);
            }
            if (g <= 1)
                continue;
            if (d % g != 0)
                fail(ErrorCode::NotNormalizable,
                     "gcd " + std::to_string(g) + " of the weights other than a_"
                         + std::to_string(i) + " does not divide the degree "
                         + std::to_string(d));
            for (std::size_t j = 0; j < a.size(); ++j) {
                if (j != i)
                    a[j] /= g;
            }
            d /= g;
            changed = true;
        }
    }
    return WeightedFamily(std::move(a), d);
}

bool mm_hypothesis(const WeightedFamily& fam)
{
    const int n = fam.dimension();
    if (n >= 3)
        return true;
    if (n == 2) {
        const auto& a = fam.weights();
        return a[0] + a[1] + a[2] + a[3] != fam.degree();
    }
    return false;
}

bool order_theory_applies(const WeightedFamily& fam)
{
    return fam.dimension() == 1 || mm_hypothesis(fam);
}

bool lin_finite(const WeightedFamily& fam)
{
    const auto top = fam.max_weight();
    const auto d = fam.degree();
    if (d > 2 * top)
        return true;
    if (d == 2 * top)
        return std::count(fam.weights().begin(), fam.weights().end(), top) == 1;
    return false;
}

bool is_linear_cone(const WeightedFamily& fam)
{
    return std::find(fam.weights().begin(), fam.weights().end(), fam.degree())
        != fam.weights().end();
}

namespace {

class MonomialEnumerator {
public:
    MonomialEnumerator(const WeightedFamily& fam, std::uint64_t mask, std::uint64_t budget)
        : weights_(fam.weights()), mask_(mask), budget_(budget), current_(fam.size(), 0)
    {
        // Index of the last variable allowed by the mask closes each branch.
        last_ = -1;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (mask_ >> i & 1)
                last_ = static_cast<int>(i);
        }
    }

    std::vector<Monomial> run(std::int64_t degree)
    {
        if (last_ >= 0)
            visit(0, degree);
        return std::move(out_);
    }

private:
    void visit(std::size_t i, std::int64_t remaining)
    {
        if (static_cast<int>(i) == last_) {
            if (remaining % weights_[i] == 0) {
                current_[i] = static_cast<std::uint32_t>(remaining / weights_[i]);
                emit();
                current_[i] = 0;
            }
            return;
        }
        if (!(mask_ >> i & 1)) {
            visit(i + 1, remaining);
            return;
        }
        for (std::int64_t k = remaining / weights_[i]; k >= 0; --k) {
            current_[i] = static_cast<std::uint32_t>(k);
            visit(i + 1, remaining - k * weights_[i]);
        }
        current_[i] = 0;
    }

    void emit()
    {
        if (out_.size() >= budget_)
            fail(ErrorCode::BudgetExceeded,
                 "monomial enumeration exceeded the budget of " + std::to_string(budget_));
        out_.push_back(Monomial{current_});
    }

    const std::vector<std::int64_t>& weights_;
    std::uint64_t mask_;
    std::uint64_t budget_;
    Exponents current_;
    int last_ = -1;
    std::vector<Monomial> out_;
};

} // namespace

MonomialSystem enumerate_monomials_in(const WeightedFamily& fam, std::uint64_t subset_mask,
                                      std::uint64_t budget)
{
    MonomialEnumerator walker(fam, subset_mask, budget);
    return MonomialSystem(fam, walker.run(fam.degree()));
}

MonomialSystem enumerate_monomials(const WeightedFamily& fam, std::uint64_t budget)
{
    const std::uint64_t all = (std::uint64_t{1} << fam.size()) - 1;
    return enumerate_monomials_in(fam, all, budget);
}

} // namespace wph
