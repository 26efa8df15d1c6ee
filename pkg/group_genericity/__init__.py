# coding=utf8
"""Group Genericity

Genericity diagnostics of cause-mechanism models: contrasts, their expected \
values under compact groups of transformations, generic ratios, and the \
causal inference methods and experiments built on them
"""

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-12"

# Limit imports
__all__ = [

	# Types
	'CircularShift', 'Contrast', 'GaussianMixture', 'NmfFactors',
	'OrthogonalMatrix', 'Permutation', 'RngState', 'SampledPsd',

	# Exceptions
	'ContrastEvaluationException', 'GenericityConfigException',
	'GenericityDataException', 'GenericityDegenerateException',
	'GenericityException',

	# Diagnostics
	'assess', 'egc_mixture', 'egc_monte_carlo', 'egc_nmf', 'egc_sic',
	'egc_trace', 'generic_ratio', 'randomization_test',

	# Output
	'verbose'
]

# Local imports
from group_genericity.contrasts import \
	Contrast, GaussianMixture, NmfFactors, SampledPsd
from group_genericity.exceptions import \
	ContrastEvaluationException, GenericityConfigException, \
	GenericityDataException, GenericityDegenerateException, \
	GenericityException
from group_genericity.genericity import \
	assess, egc_mixture, egc_monte_carlo, egc_nmf, egc_sic, egc_trace, \
	generic_ratio, randomization_test
from group_genericity.groups import \
	CircularShift, OrthogonalMatrix, Permutation, RngState
from group_genericity.output import verbose

# Register the scene contrast
from group_genericity import scenes as _scenes
