# coding=utf8
"""Group Genericity Tests

Unit tests of the group_genericity package. The slow statistical checks in \
test_acceptance only run with GENERICITY_SLOW=1
"""

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-26"
