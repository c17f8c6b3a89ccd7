"""Sinlet and coslet orthonormal bases for transient signals and images."""
from .analysis import (DopplerParams, denoise, design_matrix, differentiate,
                       doppler_coefficients, doppler_echo, envelope,
                       fit_nonuniform, suggest_order)
from .basis import SinletBasis, gram_matrix, inner_products
from .errors import (AliasingError, DegenerateInputError, DomainError,
                     FormatError, IllPosedError, OrderOverflowError,
                     ParameterError, PrecisionLossError, SinletError,
                     UnsupportedKindError)
from .image import (Basis2D, GrayImage, ImageCoefficients, basis2d_eval, dcr,
                    dcr_bytes, image_decompose, image_reconstruct, psnr)
from .phase import Family, PhaseFamily, PhaseJet, ValidityReport, eval_jet, schwarzian, validate
from .transform import (CoefficientVector, Kind, SampledSignal, coupling_matrix,
                        cos_to_sin, decompose, estimate_basis, estimate_center,
                        estimate_nmax, estimate_width, max_safe_order,
                        reconstruct, sin_to_cos)

__version__ = "0.1.0"
