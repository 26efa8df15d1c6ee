from setuptools import setup

with open('README.md', 'r') as oF:
	long_description=oF.read()

setup(
	name='group-genericity',
	version='1.0.0',
	description='Genericity diagnostics of cause-mechanism models under compact groups',
	long_description=long_description,
	long_description_content_type='text/markdown',
	url='https://ouroboroscoding.com/group-genericity',
	project_urls={
		'Documentation': 'https://ouroboroscoding.com/group-genericity',
		'Source': 'https://github.com/ouroboroscoding/group-genericity-python',
		'Tracker': 'https://github.com/ouroboroscoding/group-genericity-python/issues'
	},
	keywords=['causality','genericity','haar','nmf','clustering','spectral'],
	author='Chris Nasr - Ouroboros Coding Inc.',
	author_email='chris@ouroboroscoding.com',
	license='MIT',
	packages=['group_genericity'],
	package_data={'group_genericity': [
		'definitions/*.json',
		'fixtures/*.json'
	]},
	python_requires='>=3.10',
	install_requires=[
		'arrow>=1.2.2,<1.3',
		'define-oc>=1.0.0,<1.1',
		'jobject>=1.0.2,<1.1',
		'jsonb>=1.0.0,<1.1',
		'numpy>=1.24',
		'scipy>=1.10',
		'tools-oc>=1.0.0,<2',
		'undefined-oc>=1.0.0,<1.1'
	],
	entry_points={
		'console_scripts': ['group-genericity=group_genericity.cli:main']
	},
	extras_require={
		'test': ['pytest>=7.0']
	},
	zip_safe=False
)
