"""One-dimensional descriptions of invariant metrics and hermitian metrics."""
from .construct import potential_from_gamma
from .hermitian import (
    HermitianProfile,
    HermitianReport,
    HypothesisReport,
    between_hermitian_profile,
    canonical_hermitian,
    canonical_hermitian_profile,
    check_hypothesis,
    constant_hermitian_profile,
    fubini_study_hermitian_profile,
    samples_hermitian_profile,
    validate_hermitian,
)
from .potential import (
    KahlerPotential,
    canonical_potential,
    concave_conjugate,
    density_from_potential,
    fubini_study_potential,
    gamma_from_potential,
    legendre_fenchel,
    moment_inverse,
    moment_limits,
    reflect_potential,
)
from .symplectic import (
    ClassGReport,
    Mollifier,
    SymplecticProfile,
    bump_profile,
    canonical_gamma_profile,
    constant_weight_profile,
    fubini_study_profile,
    gamma_can,
    gamma_fs,
    mixture_profile,
    reflect,
    samples_profile,
    validate_class_g,
)


def fs_profile():
    """Fubini-Study: F_0(u) = -1/2 log(1 + e^{-2u}) and gamma_0(x) = 2x(1-x)."""
    return fubini_study_potential(), fubini_study_profile()


def canonical_profile():
    """The canonical singular metric: F_can and gamma_can(x) = 2 min(x, 1-x)."""
    return canonical_potential(), canonical_gamma_profile()


from .families import random_admissible_pair, random_gamma, seeded_pairs  # noqa: E402
from .io import (  # noqa: E402
    dumps,
    gamma_from_dict,
    hermitian_from_dict,
    load_gamma,
    load_hermitian,
    profile_to_dict,
    sample,
)
