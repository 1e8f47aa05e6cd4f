"""PCA + MLP classifier for the Breast Cancer Coimbra biomarker data."""
from .crossval import CvReport, FoldPlan, FoldResult, run_cv, shuffle_and_fold, sweep_dims, train_fold
from .dataio import BCCD_SCHEMA, Dataset, class_counts, load_bccd, parse_bccd, render_bccd
from .metrics import accuracy, confusion, mean_std
from .nn import MlpModel, TrainConfig, init_model, predict
from .preprocess import PcaModel, ScalerParams, apply_scaler, fit_pca, fit_scaler, project

__version__ = "0.1.0"
