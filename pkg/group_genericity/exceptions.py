# coding=utf8
"""Genericity Exceptions

Exceptions raised by the group_genericity modules, each one carrying a short \
kind string so callers and the CLI can tell errors apart without parsing \
messages
"""

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-12"

# Limit exports
__all__ = [
	'ContrastEvaluationException', 'GenericityConfigException',
	'GenericityDataException', 'GenericityDegenerateException',
	'GenericityException'
]

class GenericityException(Exception):
	"""Genericity Exception

	Base of every exception raised by the library. The first argument is the \
	kind of error (e.g. 'invalid-dimension'), the second the message

	Extends:
		Exception
	"""

	exit_code = 1
	"""Exit Code

	The process exit code the CLI uses when this exception escapes"""

	def __init__(self, kind: str, message: str = ''):
		"""Constructor

		Creates a new instance

		Arguments:
			kind (str): The kind of error
			message (str): Optional, a human readable message

		Returns:
			GenericityException
		"""
		super().__init__(kind, message)
		self.kind = kind
		self.message = message

	def __str__(self) -> str:
		return '%s: %s' % (self.kind, self.message) if self.message else self.kind

class GenericityConfigException(GenericityException):
	"""Genericity Config Exception

	Raised for invalid configuration values and parameters, including \
	dimensions and sizes out of range

	Extends:
		GenericityException
	"""
	exit_code = 2

class GenericityDataException(GenericityException):
	"""Genericity Data Exception

	Raised when input data does not meet the preconditions of an operation

	Extends:
		GenericityException
	"""
	exit_code = 3

class GenericityDegenerateException(GenericityException):
	"""Genericity Degenerate Exception

	Raised when a quantity is numerically undefined, like a ratio over a zero \
	expected contrast

	Extends:
		GenericityException
	"""
	exit_code = 4

class ContrastEvaluationException(GenericityDegenerateException):
	"""Contrast Evaluation Exception

	Raised by the Monte-Carlo engine when evaluating the contrast fails on one \
	of the sampled group elements. The element and the original exception are \
	kept on the instance

	Extends:
		GenericityDegenerateException
	"""

	def __init__(self, element: any, cause: Exception):
		"""Constructor

		Creates a new instance

		Arguments:
			element (any): The group element the contrast failed on
			cause (Exception): The exception raised by the contrast

		Returns:
			ContrastEvaluationException
		"""
		super().__init__(
			'contrast-evaluation',
			'%s on group element %r' % (cause.__class__.__name__, element)
		)
		self.element = element
		self.cause = cause
