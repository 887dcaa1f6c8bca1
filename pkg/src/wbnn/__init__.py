"""Single-layer wavelet network learning of univariate functions."""
from .activation import ShrinkageRule, compression_pct, rank
from .besov import INF, BesovParams, besov_seq_norm, hilbert_target, sobolev_line
from .density import EmpiricalDensity, density_mise, estimate_density, risk_experiment
from .exceptions import (BoundaryError, DomainError, EmbeddingError, ParameterError, RegionError,
                         SamplerError, ShapeError, StructureError)
from .learner import (LearnConfig, LearnReport, benchmark_compression, compression_sweep,
                      error_concentration, learn, swarm_learn)
from .wavelet import (CoefficientTree, FilterPair, SampleGrid, analyze, make_daubechies, no_wrap_j0,
                      synthesize)

__version__ = "0.1.0"
