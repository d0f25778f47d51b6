"""
Test settings for the KP Verify project.

These settings are optimized for fast test execution:
- In-memory SQLite database (fast, no I/O)
- Disabled migrations
- Synchronous Celery execution
- Reduced Monte Carlo sample counts (tests pass explicit counts where the
  statistics matter)
"""

import dj_database_url

from .base import *  # noqa

DATABASES = {
    "default": dj_database_url.config(
        default="sqlite:///:memory:",
        conn_max_age=600,
    )
}


class DisableMigrations:
    """
    Disable migrations during tests.

    This significantly speeds up test database creation.
    """

    def __contains__(self, item):
        return True

    def __getitem__(self, item):
        return None


MIGRATION_MODULES = DisableMigrations()

# Celery runs synchronously in tests (tasks execute immediately)
CELERY_TASK_ALWAYS_EAGER = True
CELERY_TASK_EAGER_PROPAGATES = True

INSTALLED_APPS = [
    app for app in INSTALLED_APPS if app not in ["django_extensions"]
]  # noqa
DEBUG = False

KP_MC_SAMPLES = 200_000
KP_MC_WORKERS = 2

# Simpler logging for tests
LOGGING = {
    "version": 1,
    "disable_existing_loggers": True,
    "handlers": {
        "null": {
            "class": "logging.NullHandler",
        },
    },
    "root": {
        "handlers": ["null"],
    },
}
