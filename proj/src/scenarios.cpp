#include "qsim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace qsim {

namespace {

constexpr std::size_t default_frequency_trials = 100000;
constexpr std::size_t default_correlation_trials = 10000;

std::uint64_t sub_seed(const ScenarioParams& params, std::uint64_t purpose,
                       std::uint64_t trial) {
    return derive_seed(derive_seed(params.seed, purpose), trial);
}

std::size_t freq_trials(const ScenarioParams& p) {
    return p.trials ? p.trials : default_frequency_trials;
}
std::size_t corr_trials(const ScenarioParams& p) {
    return p.trials ? p.trials : default_correlation_trials;
}

void require_normalized_pair(cplx alpha, cplx beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > eps_norm)
        throw std::invalid_argument("amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
}

// Initial product state: `system` on the leading factors, every remaining
// factor in its basis-0 ready state.
StateVector with_ready_ancillas(const CompositeSpace& space, const StateVector& system) {
    const std::size_t rest = space.dimension() / system.dimension();
    std::vector<cplx> amps(space.dimension(), cplx{0.0, 0.0});
    for (std::size_t s = 0; s < system.dimension(); ++s)
        amps[s * rest] = system.amplitude(s);
    return StateVector(space, std::move(amps));
}

MeasurementEvent make_event(const CompositeSpace& space, std::string id, std::size_t target,
                            Observable obs, std::size_t apparatus,
                            std::optional<std::size_t> environment = std::nullopt,
                            std::vector<std::pair<std::string, std::size_t>> brains = {}) {
    MeasurementEvent ev;
    ev.id = std::move(id);
    ev.spec.target = target;
    const std::size_t outcomes = obs.outcome_count();
    ev.spec.observable = std::move(obs);
    ev.spec.apparatus = PointerRecord::basis_pointers(space, apparatus, outcomes);
    if (environment)
        ev.spec.environment = PointerRecord::basis_pointers(space, *environment, outcomes);
    for (auto& [observer_id, factor] : brains)
        ev.participants.push_back(
            Participant{observer_id, PointerRecord::basis_pointers(space, factor, outcomes)});
    return ev;
}

void add_no_reduction_check(ScenarioReport& rep, const std::string& what,
                            const std::string& before, const BranchedState& state) {
    rep.add("no-reduction invariant: " + what + " serialization byte-identical", 1.0,
            state.serialize() == before ? 1.0 : 0.0, 0.0);
}

std::string opposite(const std::string& label) { return label == "+" ? "-" : "+"; }

Matrix plus_projector(const Observable& obs) { return obs.projector(0); }
Matrix minus_projector(const Observable& obs) { return obs.projector(1); }

}  // namespace

int LhvAssignment::same_count() const {
    int count = 0;
    if (values[0] == values[1]) ++count;
    if (values[0] == values[2]) ++count;
    if (values[1] == values[2]) ++count;
    return count;
}

double lhv_oracle() {
    int min_count = 3;
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b)
            for (int c = 0; c <= 1; ++c) {
                const LhvAssignment assignment{{a, b, c}};
                min_count = std::min(min_count, assignment.same_count());
            }
    return static_cast<double>(min_count);
}

std::vector<InterferenceRow> interference_table(const std::vector<cplx>& mu,
                                                const Matrix& nu) {
    const std::size_t n = mu.size();
    if (nu.rows() != n || nu.cols() != n)
        throw std::invalid_argument("interference_table: dimension mismatch");
    if (!nu.is_unitary(eps_num))
        throw std::invalid_argument("interference_table: non-unitary change of basis");
    double mu_norm = 0.0;
    for (const cplx& m : mu) mu_norm += std::norm(m);
    if (std::abs(mu_norm - 1.0) > eps_norm)
        throw std::invalid_argument("interference_table: mu is not normalized");

    std::vector<InterferenceRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx coherent_amp{0.0, 0.0};
        double incoherent = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            coherent_amp += mu[j] * nu(i, j);
            incoherent += std::norm(mu[j]) * std::norm(nu(i, j));
        }
        rows[i].coherent = std::norm(coherent_amp);
        rows[i].incoherent = incoherent;
        rows[i].difference = rows[i].coherent - rows[i].incoherent;
    }
    return rows;
}

StateVector singlet_state() {
    const CompositeSpace space = qubit_space("U").tensor(qubit_space("V"));
    const double r = 1.0 / std::sqrt(2.0);
    return StateVector(space, {0.0, r, -r, 0.0});
}

StateVector phi_plus_state() {
    const CompositeSpace space = qubit_space("1").tensor(qubit_space("2"));
    const double r = 1.0 / std::sqrt(2.0);
    return StateVector(space, {r, 0.0, 0.0, r});
}

ScenarioReport scenario_mixture_vs_superposition(const ScenarioParams& params) {
    ScenarioReport rep("mixture", params);
    const std::size_t n_exact = corr_trials(params);
    const std::size_t n_freq = freq_trials(params);

    const CompositeSpace qubit = qubit_space("S");
    const double r = 1.0 / std::sqrt(2.0);
    const StateVector eq4(qubit, {r, r});  // (|+⟩z + |−⟩z)/√2

    const CompositeSpace space =
        qubit.tensor(CompositeSpace::single(FactorRole::Apparatus, "A", 2));

    // Set 1 along Ox: the superposition is the +x eigenstate, so every trial
    // must come out "+".
    {
        BranchedState state = BranchedState::initial(with_ready_ancillas(space, eq4))
                                  .split(make_event(space, "x", 0, pauli_x(), 1));
        const std::string before = state.serialize();
        std::size_t plus = 0;
        for (std::size_t t = 0; t < n_exact; ++t) {
            Observer probe("probe", sub_seed(params, 0, t));
            if (probe.hang_up(state, "x") == "+") ++plus;
        }
        rep.add("set 1 along Ox: '+' frequency", 1.0,
                static_cast<double>(plus) / static_cast<double>(n_exact), 0.0);
        add_no_reduction_check(rep, "set 1 Ox state", before, state);
    }

    // Set 1 along Oz: half and half.
    {
        BranchedState state = BranchedState::initial(with_ready_ancillas(space, eq4))
                                  .split(make_event(space, "z", 0, pauli_z(), 1));
        std::size_t plus = 0;
        for (std::size_t t = 0; t < n_freq; ++t) {
            Observer probe("probe", sub_seed(params, 1, t));
            if (probe.hang_up(state, "z") == "+") ++plus;
        }
        rep.add("set 1 along Oz: '+' frequency", 0.5,
                static_cast<double>(plus) / static_cast<double>(n_freq),
                stat_tolerance(0.5, n_freq));
    }

    // Set 2: a proper 50/50 mixture of |+⟩z and |−⟩z, simulated the classical
    // way: draw the component, then sample the outcome from that pure state.
    {
        std::size_t plus_x = 0, plus_z = 0;
        const Matrix px = plus_projector(pauli_x());
        for (std::size_t t = 0; t < n_freq; ++t) {
            Rng rng(sub_seed(params, 2, t));
            const bool component_up = rng.bernoulli(0.5);
            const StateVector comp = component_up ? spin_up(qubit) : spin_down(qubit);
            const double p_plus_x = outcome_probability(from_pure(comp), px);
            if (rng.bernoulli(p_plus_x)) ++plus_x;
            if (component_up) ++plus_z;  // z-measurement reveals the component
        }
        rep.add("set 2 along Ox: '+' frequency", 0.5,
                static_cast<double>(plus_x) / static_cast<double>(n_freq),
                stat_tolerance(0.5, n_freq));
        rep.add("set 2 along Oz: '+' frequency", 0.5,
                static_cast<double>(plus_z) / static_cast<double>(n_freq),
                stat_tolerance(0.5, n_freq));
    }

    // Analytic agreement of the two routes for the mixture.
    {
        const MixtureSpec mixture{{{0.5, spin_up(qubit)}, {0.5, spin_down(qubit)}}};
        rep.add("set 2 density route: P(+x) from the mixed density matrix", 0.5,
                outcome_probability(from_mixture(mixture), plus_projector(pauli_x())),
                eps_num);
    }
    return rep;
}

ScenarioReport scenario_interference(const ScenarioParams& params) {
    ScenarioReport rep("interference", params);
    const double r = 1.0 / std::sqrt(2.0);
    const Matrix x_basis = Matrix::from_rows({{r, r}, {r, -r}});

    {
        const auto rows = interference_table({cplx{1.0, 0.0}, cplx{0.0, 0.0}}, x_basis);
        double max_diff = 0.0;
        for (const auto& row : rows) max_diff = std::max(max_diff, std::abs(row.difference));
        rep.add("single-term superposition: max |difference|", 0.0, max_diff, eps_num);
    }
    {
        const auto rows = interference_table({cplx{r, 0.0}, cplx{r, 0.0}}, x_basis);
        rep.add("mu=(1,1)/sqrt2 in x-basis: difference on outcome 0", 0.5,
                rows[0].difference, eps_num);
        rep.add("mu=(1,1)/sqrt2 in x-basis: difference on outcome 1", -0.5,
                rows[1].difference, eps_num);
    }
    {
        // Seeded random 3-dimensional case.
        Rng rng(sub_seed(params, 3, 0));
        Matrix h(3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            h(i, i) = rng.normal();
            for (std::size_t j = i + 1; j < 3; ++j) {
                const cplx v{rng.normal(), rng.normal()};
                h(i, j) = v;
                h(j, i) = std::conj(v);
            }
        }
        const Matrix nu = unitary_from_hamiltonian(h, 1.0);
        std::vector<cplx> mu(3);
        double norm2 = 0.0;
        for (cplx& m : mu) {
            m = cplx{rng.normal(), rng.normal()};
            norm2 += std::norm(m);
        }
        for (cplx& m : mu) m /= std::sqrt(norm2);

        const auto rows = interference_table(mu, nu);

        double max_cross_dev = 0.0;
        double coherent_sum = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            cplx cross{0.0, 0.0};
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t jp = 0; jp < 3; ++jp) {
                    if (j == jp) continue;
                    cross += std::conj(mu[j] * nu(i, j)) * mu[jp] * nu(i, jp);
                }
            max_cross_dev =
                std::max(max_cross_dev, std::abs(rows[i].difference - cross.real()));
            coherent_sum += rows[i].coherent;
        }
        rep.add("random 3-dim: max |difference - explicit cross-term sum|", 0.0,
                max_cross_dev, eps_num);
        rep.add("random 3-dim: coherent probabilities sum to 1", 1.0, coherent_sum, eps_num);

        // Density route: the coherent probability is the Born probability of
        // the superposed state.
        const CompositeSpace space = CompositeSpace::single(FactorRole::System, "S", 3);
        std::vector<cplx> amps(3, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) amps[i] += mu[j] * nu(i, j);
        const DensityMatrix rho = from_pure(StateVector(space, amps).normalized());
        double max_dev = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const double p =
                outcome_probability(rho, projector_onto(StateVector::basis_state(space, i)));
            max_dev = std::max(max_dev, std::abs(p - rows[i].coherent));
        }
        rep.add("random 3-dim: coherent row matches density-route probability", 0.0, max_dev,
                eps_num);
    }
    return rep;
}

ScenarioReport scenario_epr(const ScenarioParams& params) {
    ScenarioReport rep("epr", params);
    const std::size_t n = corr_trials(params);

    const struct {
        const char* name;
        Observable obs;
    } axes[] = {
        {"z", pauli_z()},
        {"u", rotated_spin_observable(std::numbers::pi / 3.0)},
        {"v", rotated_spin_observable(-std::numbers::pi / 3.0)},
        {"x", pauli_x()},
    };

    const Observer bob("bob", 0);  // only its identity is consulted by query
    bool all_identical = true;
    for (std::size_t a = 0; a < std::size(axes); ++a) {
        const CompositeSpace space =
            qubit_space("U")
                .tensor(qubit_space("V"))
                .tensor(CompositeSpace::single(FactorRole::Apparatus, "AU", 2))
                .tensor(CompositeSpace::single(FactorRole::Apparatus, "AV", 2))
                .tensor(CompositeSpace::single(FactorRole::Brain, "B:bob", 2));
        BranchedState state =
            BranchedState::initial(with_ready_ancillas(space, singlet_state()))
                .split(make_event(space, "alice", 0, axes[a].obs, 2))
                .split(make_event(space, "bob", 1, axes[a].obs, 3, std::nullopt,
                                  {{"bob", 4}}));
        const std::string before = state.serialize();
        std::size_t anti = 0;
        for (std::size_t t = 0; t < n; ++t) {
            Observer alice("alice", sub_seed(params, a, t));
            const std::string own = alice.hang_up(state, "alice");
            const std::string answer = alice.query(state, bob, "bob");
            if (answer == opposite(own)) ++anti;
        }
        rep.add(std::string("same-axis anti-correlation via query, axis ") + axes[a].name,
                1.0, static_cast<double>(anti) / static_cast<double>(n), 0.0);
        all_identical = all_identical && state.serialize() == before;
    }
    rep.add("no-reduction invariant: all EPR states byte-identical", 1.0,
            all_identical ? 1.0 : 0.0, 0.0);

    // Singlet vs the z-definite mixture: the +x⊗+x prediction separates them.
    {
        const DensityMatrix singlet = from_pure(singlet_state());
        const StateVector up(qubit_space("U"), {1.0, 0.0});
        const StateVector down(qubit_space("U"), {0.0, 1.0});
        const StateVector up_v(qubit_space("V"), {1.0, 0.0});
        const StateVector down_v(qubit_space("V"), {0.0, 1.0});
        const MixtureSpec mixture{
            {{0.5, tensor(up, down_v)}, {0.5, tensor(down, up_v)}}};

        const Matrix joint_xx =
            Matrix::kron(plus_projector(pauli_x()), plus_projector(pauli_x()));
        const auto [singlet_p, mixture_p] = joint_prediction_gap(singlet, mixture, joint_xx);
        rep.add("singlet P(+x,+x)", 0.0, singlet_p, eps_num);
        rep.add("z-mixture P(+x,+x)", 0.25, mixture_p, eps_num);

        const Matrix joint_z_anti =
            Matrix::kron(plus_projector(pauli_z()), minus_projector(pauli_z()));
        const auto [sz, mz] = joint_prediction_gap(singlet, mixture, joint_z_anti);
        rep.add("singlet P(+z,-z)", 0.5, sz, eps_num);
        rep.add("z-mixture P(+z,-z)", 0.5, mz, eps_num);

        // Reduced single-particle state of the singlet is maximally mixed.
        const DensityMatrix reduced = partial_trace(singlet, {0});
        Matrix half_identity = Matrix::identity(2) * cplx{0.5, 0.0};
        rep.add("reduced singlet deviation from I/2", 0.0,
                reduced.matrix().max_abs_diff(half_identity), 1e-12);
    }
    return rep;
}

ScenarioReport scenario_bell(const ScenarioParams& params) {
    ScenarioReport rep("bell", params);
    const std::size_t n = params.trials ? params.trials : default_frequency_trials;

    const Observable axis_a = pauli_z();
    const Observable axis_b = rotated_spin_observable(std::numbers::pi / 3.0);
    const Observable axis_c = rotated_spin_observable(-std::numbers::pi / 3.0);

    // Basis-invariance precheck: the state rebuilt in the rotated bases
    // must be the same vector.
    {
        const StateVector phi = phi_plus_state();
        const double r = 1.0 / std::sqrt(2.0);
        for (const auto& [name, angle] :
             {std::pair{"u", std::numbers::pi / 3.0}, std::pair{"v", -std::numbers::pi / 3.0}}) {
            auto [plus1, minus1] = rotated_spin_basis(angle, qubit_space("1"));
            auto [plus2, minus2] = rotated_spin_basis(angle, qubit_space("2"));
            const StateVector rebuilt =
                (tensor(plus1, plus2) + tensor(minus1, minus2)) * cplx{r, 0.0};
            rep.add(std::string("basis invariance: max amplitude deviation in ") + name,
                    0.0, phi.max_abs_diff(rebuilt), 1e-12);
        }
    }

    const DensityMatrix rho = from_pure(phi_plus_state());
    const struct {
        const char* name;
        const Observable& first;
        const Observable& second;
    } pairs[] = {
        {"(A,B)", axis_a, axis_b},
        {"(A,C)", axis_a, axis_c},
        {"(B,C)", axis_b, axis_c},
    };

    double analytic_sum = 0.0, empirical_sum = 0.0;
    for (std::size_t p = 0; p < std::size(pairs); ++p) {
        const auto& pair = pairs[p];
        const double analytic =
            outcome_probability(
                rho, Matrix::kron(plus_projector(pair.first), plus_projector(pair.second))) +
            outcome_probability(
                rho, Matrix::kron(minus_projector(pair.first), minus_projector(pair.second)));
        rep.add(std::string("analytic P_same") + pair.name, 0.25, analytic, eps_num);
        analytic_sum += analytic;

        const CompositeSpace space =
            qubit_space("1")
                .tensor(qubit_space("2"))
                .tensor(CompositeSpace::single(FactorRole::Apparatus, "A1", 2))
                .tensor(CompositeSpace::single(FactorRole::Apparatus, "A2", 2));
        BranchedState state =
            BranchedState::initial(with_ready_ancillas(space, phi_plus_state()))
                .split(make_event(space, "first", 0, pair.first, 2))
                .split(make_event(space, "second", 1, pair.second, 3));
        const std::string before = state.serialize();
        std::size_t same = 0;
        for (std::size_t t = 0; t < n; ++t) {
            Observer probe("probe", sub_seed(params, p, t));
            const std::string one = probe.hang_up(state, "first");
            const std::string two = probe.hang_up(state, "second");
            if (one == two) ++same;
        }
        const double freq = static_cast<double>(same) / static_cast<double>(n);
        rep.add(std::string("empirical P_same") + pair.name, 0.25, freq,
                stat_tolerance(0.25, n));
        empirical_sum += freq;
        add_no_reduction_check(rep, std::string("pair ") + pair.name + " state", before,
                               state);
    }

    rep.add("analytic P_same sum", 0.75, analytic_sum, eps_num);
    rep.add("empirical P_same sum", 0.75, empirical_sum,
            5.0 * std::sqrt(3.0 * 0.25 * 0.75 / static_cast<double>(n)));

    const double bound = lhv_oracle();
    rep.add("LHV enumeration lower bound", 1.0, bound, 0.0);
    rep.add("LHV bound minus quantum sum", 0.25, bound - analytic_sum, eps_num);
    return rep;
}

ScenarioReport scenario_mermin_square(const ScenarioParams& params) {
    ScenarioReport rep("mermin", params);

    const Matrix sx = pauli_x_matrix(), sy = pauli_y_matrix(), sz = pauli_z_matrix();
    const Matrix id2 = Matrix::identity(2);

    // Fig. 1 layout, row-major: entry (r, c) acts on the two-spin space.
    const Matrix square[3][3] = {
        {Matrix::kron(sx, id2), Matrix::kron(id2, sx), Matrix::kron(sx, sx)},
        {Matrix::kron(id2, sy), Matrix::kron(sy, id2), Matrix::kron(sy, sy)},
        {Matrix::kron(sx, sy), Matrix::kron(sy, sx), Matrix::kron(sz, sz)},
    };

    for (int r = 0; r < 3; ++r) {
        double max_comm = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                max_comm = std::max(max_comm,
                                    commutator(square[r][a], square[r][b]).max_abs());
        rep.add("row " + std::to_string(r + 1) + " mutual commutation: max |[.,.]|", 0.0,
                max_comm, 1e-10);
    }
    for (int c = 0; c < 3; ++c) {
        double max_comm = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                max_comm = std::max(max_comm,
                                    commutator(square[a][c], square[b][c]).max_abs());
        rep.add("column " + std::to_string(c + 1) + " mutual commutation: max |[.,.]|", 0.0,
                max_comm, 1e-10);
    }

    const Matrix id4 = Matrix::identity(4);
    for (int r = 0; r < 3; ++r) {
        const Matrix product = square[r][0] * square[r][1] * square[r][2];
        rep.add("row " + std::to_string(r + 1) + " product deviation from +I", 0.0,
                product.max_abs_diff(id4), 1e-10);
    }
    for (int c = 0; c < 2; ++c) {
        const Matrix product = square[0][c] * square[1][c] * square[2][c];
        rep.add("column " + std::to_string(c + 1) + " product deviation from +I", 0.0,
                product.max_abs_diff(id4), 1e-10);
    }
    {
        const Matrix product = square[0][2] * square[1][2] * square[2][2];
        const Matrix minus_id = id4 * cplx{-1.0, 0.0};
        rep.add("column 3 product deviation from -I", 0.0, product.max_abs_diff(minus_id),
                1e-10);
    }

    // No ±1 value assignment reproduces the six product constraints.
    std::size_t consistent = 0;
    for (unsigned mask = 0; mask < 512; ++mask) {
        int v[3][3];
        for (int cell = 0; cell < 9; ++cell)
            v[cell / 3][cell % 3] = (mask >> cell) & 1u ? 1 : -1;
        bool ok = true;
        for (int r = 0; r < 3 && ok; ++r) ok = v[r][0] * v[r][1] * v[r][2] == 1;
        for (int c = 0; c < 2 && ok; ++c) ok = v[0][c] * v[1][c] * v[2][c] == 1;
        if (ok) ok = v[0][2] * v[1][2] * v[2][2] == -1;
        if (ok) ++consistent;
    }
    rep.add("consistent value assignments over all 512", 0.0,
            static_cast<double>(consistent), 0.0);
    return rep;
}

ScenarioReport scenario_wigners_friend(const ScenarioParams& params) {
    ScenarioReport rep("wigner", params);
    require_normalized_pair(params.alpha, params.beta);
    const std::size_t n = corr_trials(params);

    const CompositeSpace space =
        qubit_space("S")
            .tensor(CompositeSpace::single(FactorRole::Apparatus, "AF", 2))
            .tensor(CompositeSpace::single(FactorRole::Brain, "B:friend", 2))
            .tensor(CompositeSpace::single(FactorRole::Apparatus, "AO", 2))
            .tensor(CompositeSpace::single(FactorRole::Brain, "B:observer", 2));

    auto build = [&](cplx alpha, cplx beta) {
        const StateVector system(qubit_space("S"), {alpha, beta});
        return BranchedState::initial(with_ready_ancillas(space, system))
            .split(make_event(space, "friend-z", 0, pauli_z(), 1, std::nullopt,
                              {{"friend", 2}}))
            .split(make_event(space, "observer-z", 0, pauli_z(), 3, std::nullopt,
                              {{"observer", 4}}));
    };

    const double r = 1.0 / std::sqrt(2.0);
    {
        const BranchedState state = build(cplx{r, 0.0}, cplx{r, 0.0});
        const std::string before = state.serialize();
        std::size_t agree = 0;
        for (std::size_t t = 0; t < n; ++t) {
            Observer friend_obs("friend", sub_seed(params, 0, t));
            Observer wigner("observer", sub_seed(params, 1, t));
            friend_obs.hang_up(state, "friend-z");
            const std::string own = wigner.hang_up(state, "observer-z");
            const std::string answer = wigner.query(state, friend_obs, "friend-z");
            if (answer == own) ++agree;
        }
        rep.add("measure-then-query agreement", 1.0,
                static_cast<double>(agree) / static_cast<double>(n), 0.0);
        add_no_reduction_check(rep, "balanced state", before, state);
    }

    {
        const BranchedState state = build(cplx{1.0, 0.0}, cplx{0.0, 0.0});
        std::size_t both_plus = 0;
        for (std::size_t t = 0; t < n; ++t) {
            Observer wigner("observer", sub_seed(params, 2, t));
            const std::string own = wigner.hang_up(state, "observer-z");
            Observer friend_obs("friend", sub_seed(params, 3, t));
            const std::string answer = wigner.query(state, friend_obs, "friend-z");
            if (own == "+" && answer == "+") ++both_plus;
        }
        rep.add("eigenstate input: deterministic '+' for measurement and query", 1.0,
                static_cast<double>(both_plus) / static_cast<double>(n), 0.0);
    }

    {
        // Query-first ordering: the answer is Born-distributed, and the
        // asker's own later measurement can never contradict it.
        const BranchedState state = build(params.alpha, params.beta);
        const double p_plus = std::norm(params.alpha);
        std::size_t plus = 0, contradictions = 0;
        for (std::size_t t = 0; t < n; ++t) {
            Observer wigner("observer", sub_seed(params, 4, t));
            Observer friend_obs("friend", sub_seed(params, 5, t));
            const std::string answer = wigner.query(state, friend_obs, "friend-z");
            const std::string own = wigner.hang_up(state, "observer-z");
            if (answer == "+") ++plus;
            if (own != answer) ++contradictions;
        }
        rep.add("query-first: friend reports '+' frequency", p_plus,
                static_cast<double>(plus) / static_cast<double>(n),
                stat_tolerance(p_plus, n));
        rep.add("query-first: contradictions with own later measurement", 0.0,
                static_cast<double>(contradictions), 0.0);
    }
    return rep;
}

ScenarioReport scenario_locality(const ScenarioParams& params) {
    ScenarioReport rep("locality", params);
    const std::size_t n_freq = freq_trials(params);
    const std::size_t n_corr = corr_trials(params);

    const CompositeSpace space =
        qubit_space("U")
            .tensor(qubit_space("V"))
            .tensor(CompositeSpace::single(FactorRole::Apparatus, "AU", 2))
            .tensor(CompositeSpace::single(FactorRole::Apparatus, "AV", 2))
            .tensor(CompositeSpace::single(FactorRole::Brain, "B:bob", 2));

    auto build = [&](const Observable& alice_axis) {
        return BranchedState::initial(with_ready_ancillas(space, singlet_state()))
            .split(make_event(space, "alice", 0, alice_axis, 2))
            .split(make_event(space, "bob", 1, pauli_z(), 3, std::nullopt, {{"bob", 4}}));
    };
    const BranchedState state_z = build(pauli_z());
    const BranchedState state_x = build(pauli_x());
    const std::string before_z = state_z.serialize(), before_x = state_x.serialize();

    // Bob's own marginal must not depend on Alice's measurement choice.
    double freq[2];
    const BranchedState* states[2] = {&state_z, &state_x};
    for (int c = 0; c < 2; ++c) {
        std::size_t plus = 0;
        for (std::size_t t = 0; t < n_freq; ++t) {
            Observer bob("bob", sub_seed(params, static_cast<std::uint64_t>(c), t));
            if (bob.hang_up(*states[c], "bob") == "+") ++plus;
        }
        freq[c] = static_cast<double>(plus) / static_cast<double>(n_freq);
        rep.add(std::string("Bob '+' frequency (Alice measures ") + (c == 0 ? "z" : "x") +
                    ")",
                0.5, freq[c], stat_tolerance(0.5, n_freq));
    }
    rep.add("no-signaling: |marginal difference|", 0.0, std::abs(freq[0] - freq[1]),
            5.0 * std::sqrt(2.0 * 0.25 / static_cast<double>(n_freq)));

    // Partial-trace oracle: Bob's reduced matrix is exactly I/2 either way.
    const Matrix half_identity = Matrix::identity(2) * cplx{0.5, 0.0};
    for (int c = 0; c < 2; ++c) {
        const DensityMatrix reduced =
            partial_trace(from_pure(states[c]->global_vector()), {1});
        rep.add(std::string("Bob reduced matrix deviation from I/2 (Alice ") +
                    (c == 0 ? "z" : "x") + ")",
                0.0, reduced.matrix().max_abs_diff(half_identity), eps_num);
    }

    // Alice's query of Bob, after her own hang-up, is perfectly anti-correlated.
    {
        const Observer bob("bob", 0);
        std::size_t anti = 0, alice_plus = 0;
        bool order_ok = true;
        for (std::size_t t = 0; t < n_corr; ++t) {
            Observer alice("alice", sub_seed(params, 2, t));
            const std::string own = alice.hang_up(state_z, "alice");
            const std::string answer = alice.query(state_z, bob, "bob");
            if (answer == opposite(own)) ++anti;
            if (own == "+") ++alice_plus;
            const auto path = alice.awareness_path();
            order_ok = order_ok && path.size() == 2 && path[0].first == "alice" &&
                       path[1].first == "bob";
        }
        rep.add("query anti-correlation after Alice's hang-up", 1.0,
                static_cast<double>(anti) / static_cast<double>(n_corr), 0.0);
        rep.add("Alice '+' marginal", 0.5,
                static_cast<double>(alice_plus) / static_cast<double>(n_corr),
                stat_tolerance(0.5, n_corr));
        rep.add("event ordering: query recorded after Alice's own hang-up", 1.0,
                order_ok ? 1.0 : 0.0, 0.0);
    }

    rep.add("no-reduction invariant: both configurations byte-identical", 1.0,
            state_z.serialize() == before_z && state_x.serialize() == before_x ? 1.0 : 0.0,
            0.0);
    return rep;
}

ScenarioReport scenario_sequential(const ScenarioParams& params) {
    ScenarioReport rep("sequential", params);
    require_normalized_pair(params.alpha, params.beta);
    const std::size_t n = freq_trials(params);
    const double p_plus = std::norm(params.alpha);

    const StateVector system(qubit_space("S"), {params.alpha, params.beta});

    auto block = [](const std::string& suffix) {
        return CompositeSpace::single(FactorRole::Apparatus, "A" + suffix, 2)
            .tensor(CompositeSpace::single(FactorRole::Environment, "E" + suffix, 2))
            .tensor(CompositeSpace::single(FactorRole::Brain, "B:obs:" + suffix, 2));
    };

    // z then x: the four-branch structure of the second measurement.
    {
        const CompositeSpace space = qubit_space("S").tensor(block("1")).tensor(block("2"));
        BranchedState state =
            BranchedState::initial(with_ready_ancillas(space, system))
                .split(make_event(space, "z1", 0, pauli_z(), 1, 2, {{"obs", 3}}))
                .split(make_event(space, "x2", 0, pauli_x(), 4, 5, {{"obs", 6}}));
        const std::string before = state.serialize();

        rep.add("four-branch structure: branch count", 4.0,
                static_cast<double>(state.branch_count()), 0.0);
        {
            std::vector<double> weights;
            for (const auto& b : state.branches()) weights.push_back(std::norm(b.amplitude));
            std::sort(weights.begin(), weights.end());
            std::vector<double> expected{std::norm(params.alpha) / 2.0,
                                         std::norm(params.alpha) / 2.0,
                                         std::norm(params.beta) / 2.0,
                                         std::norm(params.beta) / 2.0};
            std::sort(expected.begin(), expected.end());
            double dev = 0.0;
            for (std::size_t i = 0; i < weights.size(); ++i)
                dev = std::max(dev, std::abs(weights[i] - expected[i]));
            rep.add("four-branch structure: max weight deviation", 0.0, dev, eps_num);
        }

        std::size_t first_plus = 0, x_plus_given_plus = 0, x_plus_given_minus = 0;
        for (std::size_t t = 0; t < n; ++t) {
            Observer obs("obs", sub_seed(params, 0, t));
            const std::string a = obs.hang_up(state, "z1");
            const std::string b = obs.hang_up(state, "x2");
            if (a == "+") {
                ++first_plus;
                if (b == "+") ++x_plus_given_plus;
            } else if (b == "+") {
                ++x_plus_given_minus;
            }
        }
        rep.add("first hang-up '+' frequency", p_plus,
                static_cast<double>(first_plus) / static_cast<double>(n),
                stat_tolerance(p_plus, n));
        const std::size_t n_minus = n - first_plus;
        rep.add("conditional x '+' frequency given z '+'", 0.5,
                first_plus ? static_cast<double>(x_plus_given_plus) /
                                 static_cast<double>(first_plus)
                           : 0.0,
                stat_tolerance(0.5, std::max<std::size_t>(first_plus, 1)));
        rep.add("conditional x '+' frequency given z '-'", 0.5,
                n_minus ? static_cast<double>(x_plus_given_minus) /
                              static_cast<double>(n_minus)
                        : 0.0,
                stat_tolerance(0.5, std::max<std::size_t>(n_minus, 1)));
        add_no_reduction_check(rep, "z-then-x state", before, state);
    }

    // Immediate z repetition: same outcome, always.
    {
        const CompositeSpace space = qubit_space("S").tensor(block("1")).tensor(block("3"));
        BranchedState state =
            BranchedState::initial(with_ready_ancillas(space, system))
                .split(make_event(space, "z1", 0, pauli_z(), 1, 2, {{"obs", 3}}))
                .split(make_event(space, "z-repeat", 0, pauli_z(), 4, 5, {{"obs", 6}}));
        std::size_t agree = 0;
        for (std::size_t t = 0; t < n; ++t) {
            Observer obs("obs", sub_seed(params, 1, t));
            const std::string a = obs.hang_up(state, "z1");
            const std::string again = obs.hang_up(state, "z-repeat");
            if (a == again) ++agree;
        }
        rep.add("immediate z-repetition agreement", 1.0,
                static_cast<double>(agree) / static_cast<double>(n), 0.0);
    }
    return rep;
}

ScenarioReport scenario_decoherence(const ScenarioParams& params) {
    ScenarioReport rep("decoherence", params);
    require_normalized_pair(params.alpha, params.beta);
    const double tau = params.tau;
    if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
    std::vector<double> times = params.times;
    if (times.empty())
        times = {0.0, 0.25 * tau, 0.5 * tau, tau, 2.0 * tau, 5.0 * tau, 10.0 * tau};

    const EnvironmentModel env = EnvironmentModel::parametric(tau);
    const double ab = std::abs(params.alpha) * std::abs(params.beta);
    const CompositeSpace branch_space = CompositeSpace::single(FactorRole::System, "SA", 2);
    const std::vector<StateVector> pointer_basis_states{
        StateVector::basis_state(branch_space, 0), StateVector::basis_state(branch_space, 1)};

    rep.add("purity at t=0", 1.0,
            purity(decohered_reduced_matrix(params.alpha, params.beta, env, 0.0)), eps_num);

    double previous = 0.0;
    double max_increase = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const DensityMatrix rho = decohered_reduced_matrix(params.alpha, params.beta, env, t);
        const double w = off_diagonal_weight(rho, pointer_basis_states);
        rep.add("off-diagonal weight at t=" + format_number(t),
                2.0 * std::exp(-t / tau) * ab, w, 1e-10);
        if (i > 0) max_increase = std::max(max_increase, w - previous);
        previous = w;
    }
    rep.add("parametric decay: max off-diagonal increase along the grid", 0.0,
            std::max(max_increase, 0.0), 1e-12);

    const double t_limit = 25.0 * tau;
    const double limit_purity =
        std::norm(params.alpha) * std::norm(params.alpha) +
        std::norm(params.beta) * std::norm(params.beta);
    rep.add("purity limit at t=25*tau", limit_purity,
            purity(decohered_reduced_matrix(params.alpha, params.beta, env, t_limit)), 1e-6);

    // Finite environment, d_E = 2: decay is not monotone and |Z| recurs.
    {
        const EnvironmentModel finite = EnvironmentModel::finite(2, derive_seed(params.seed, 77));
        bool dropped = false;
        double post_drop_max = 0.0, post_drop_argmax = 0.0, first_drop = 0.0;
        for (double t = 0.05; t <= 80.0; t += 0.05) {
            const double z = std::abs(finite.z(t));
            if (!dropped && z < 0.5) {
                dropped = true;
                first_drop = t;
            } else if (dropped && z > post_drop_max) {
                post_drop_max = z;
                post_drop_argmax = t;
            }
        }
        rep.add("finite d_E=2: |Z| drops below 0.5", 1.0, dropped ? 1.0 : 0.0, 0.0);
        rep.add("finite d_E=2: shortfall of post-drop max |Z| below 0.5 (first drop t=" +
                    format_number(first_drop) + ", max=" + format_number(post_drop_max) +
                    " at t=" + format_number(post_drop_argmax) + ")",
                0.0, std::max(0.5 - post_drop_max, 0.0), 0.0);

        // Partial-trace route equals the closed form built from Z(t).
        double max_dev = 0.0;
        for (const double t : {0.3, 0.7, 1.9}) {
            const std::vector<cplx> e1 = finite.environment_amplitudes(0, t);
            const std::vector<cplx> e2 = finite.environment_amplitudes(1, t);
            const CompositeSpace joint = branch_space.tensor(
                CompositeSpace::single(FactorRole::Environment, "E", finite.env_dim()));
            std::vector<cplx> amps(joint.dimension(), cplx{0.0, 0.0});
            for (std::size_t i = 0; i < finite.env_dim(); ++i) {
                amps[i] = params.alpha * e1[i];
                amps[finite.env_dim() + i] = params.beta * e2[i];
            }
            const DensityMatrix traced =
                partial_trace(from_pure(StateVector(joint, amps)), {0});
            const DensityMatrix closed =
                decohered_reduced_matrix(params.alpha, params.beta, finite, t);
            max_dev = std::max(max_dev, traced.matrix().max_abs_diff(closed.matrix()));
        }
        rep.add("finite mode: partial-trace route matches closed form", 0.0, max_dev,
                eps_num);
    }
    return rep;
}

std::vector<std::string> list_scenarios() {
    return {"mixture", "interference", "epr",      "bell",       "mermin",
            "wigner",  "locality",     "sequential", "decoherence"};
}

ScenarioReport run_scenario(const std::string& name, const ScenarioParams& params) {
    if (name == "mixture") return scenario_mixture_vs_superposition(params);
    if (name == "interference") return scenario_interference(params);
    if (name == "epr") return scenario_epr(params);
    if (name == "bell") return scenario_bell(params);
    if (name == "mermin") return scenario_mermin_square(params);
    if (name == "wigner") return scenario_wigners_friend(params);
    if (name == "locality") return scenario_locality(params);
    if (name == "sequential") return scenario_sequential(params);
    if (name == "decoherence") return scenario_decoherence(params);
    throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace qsim
