"""
Development settings for the KP Verify project.

- DEBUG enabled
- Django Extensions (shell_plus) for poking at complexes interactively
- Verbose application logging
"""

from .base import *  # noqa

# Development mode
DEBUG = True

ALLOWED_HOSTS = ["*"]

INSTALLED_APPS += [  # noqa
    "django_extensions",
]

# Development-specific logging
LOGGING["loggers"]["apps"] = {  # noqa
    "handlers": ["console"],
    "level": "DEBUG",
    "propagate": False,
}
LOGGING["handlers"]["console"]["level"] = "DEBUG"  # noqa
