"""Executable diagrams for finite category theory."""

from .errors import (ArtifactError, ComposabilityError, DLError, DLSyntaxError, ElaborationError, InferenceError,
                     MalformedError, TypeCheckError, UnsupportedError, ValidationError)
from .fincat import (FinCategory, FinFunctor, FinSet, Morphism, NatTransf, SetFunction, SetValuedFunctor,
                     check_category, check_functor, check_naturality, compose, hom_functor, nt_compose, opposite)
from .verdict import Verdict
from .diagram import (Diagram, embed_stages, extract_stages, infer_context, parse_dl, print_dl,
                      required_equations)
from .quanteval import check_universal, eval_quantified, expand_marker
from .limits import colimit_set, limit_set
from .kan import adjunction_from_unit, check_adjunction, check_ranness, geometric_morphism, kan_extension
from .yoneda import alpha_to_eta, eta_to_alpha, find_representation, yoneda_check
from .termsearch import infer_term, normalize, reduction_graph, typecheck

__version__ = "0.1.0"
