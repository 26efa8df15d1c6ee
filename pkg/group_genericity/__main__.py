# coding=utf8
"""Group Genericity

Runs the command line interface
"""

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-23"

# Python imports
import sys

# Local imports
from group_genericity.cli import main

sys.exit(main())
