# -*- coding: utf-8 -*-
from sphinx_celery import conf

globals().update(conf.build_config(
    'sdnmc', __file__,
    project='sdnmc',
    canonical_url='http://sdnmc.readthedocs.io',
    github_project='sdnmc/sdnmc',
    copyright='2026',
    extra_extensions=[
        'sphinx.ext.napoleon',
        'celery.contrib.sphinx',
    ],
    include_intersphinx={'python', 'sphinx', 'celery'},
    extra_intersphinx_mapping={
        'networkx': ('https://networkx.org/documentation/stable/', None),
    },
    apicheck_package='sdnmc',
    apicheck_ignore_modules=[
        'sdnmc.__main__',
        'sdnmc._state',
        'sdnmc.utils',
        'sdnmc.bin',
    ],
))


def configcheck_project_settings():
    from sdnmc.conf import all_settings
    return all_settings()
