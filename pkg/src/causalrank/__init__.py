"""Edge scoring for causal structure learning from multivariate time series."""
from .algorithms import (
    LasarConfig,
    QrbsConfig,
    SelvarConfig,
    SlaracConfig,
    lasar,
    qrbs,
    selvar,
    slarac,
)
from .datagen import (
    SemModel,
    VarModel,
    marginal_variances,
    random_sem,
    random_var,
    rescale_sem,
    sample_sem,
    sample_var,
)
from .evaluation import coef_scores, roc_auc, tstat_scores
from .regression import lasso_fit, loo_rss, ols_fit, residual_stats, ridge_fit

__version__ = "0.1.0"
