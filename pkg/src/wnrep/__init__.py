"""Exact-arithmetic toolkit for weight modules over the Lie algebra of
polynomial vector fields."""

__version__ = "0.1.0"

from .dmod import (  # noqa: F401
    DFactor,
    DModule,
    TwistedDModule,
    act_weyl,
    dmod_shadow,
    dmod_support,
    dmod_weight,
    fourier,
    fpoly,
    laurent,
    poly,
    sum_partials_saturates,
)
from .duality import (  # noqa: F401
    PairingTable,
    dual_tensor,
    invariance_residual,
    pair,
    pairing_tensor,
)
from .glmod import (  # noqa: F401
    GlModule,
    as_fundamental,
    character,
    dual_gl,
    gl_weight_mult,
    restrict_kappa,
    sym,
    tensor_gl,
    wedge,
)
from .lattice import (  # noqa: F401
    Mode,
    Shadow,
    ShiftedCone,
    SupportSet,
    Weight,
    Window,
    WnRoot,
    all_finite_shadow,
    eps,
    finmult_criterion,
    frac,
    shadow_from_isets,
    support_contains,
    support_sum,
    weight_add,
    wn_roots_up_to,
)
from .levi import (  # noqa: F401
    FRSModule,
    LeviAlg,
    ParabolicData,
    act_levi,
    backtotensor_check,
    check_g_axioms,
    p_top,
    p_top_support,
    standard_gamma,
    tilde_p,
)
from .localize import (  # noqa: F401
    TwistData,
    localize,
    localize_gamma,
    phi_x,
    twist_action_check,
    twisted_localize,
)
from .tensormod import (  # noqa: F401
    TensorModule,
    act_on,
    act_wn,
    classify_case,
    derham_complex_residual,
    derham_d,
    submodule_closure,
    tmod_mult,
    tmod_support,
    window_matrix,
)
from .weyl import WeylElement, ad, sigma_f, sign_auto  # noqa: F401
