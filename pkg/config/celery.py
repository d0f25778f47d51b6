"""
Celery configuration for the KP Verify project.

The worker runs long verification sweeps (see apps.kp_checker.tasks):
- run_kp_sweep: random simply connected scenes x random fold compositions,
  each verified with kp_verify and cross-checked with peel_certificate.
"""

import os

from celery import Celery

# Set the default Django settings module for the 'celery' program.
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.dev")

app = Celery("kpverify")

# - namespace='CELERY' means all celery-related configuration keys
#   should have a `CELERY_` prefix.
app.config_from_object("django.conf:settings", namespace="CELERY")

# Load task modules from all registered Django apps.
app.autodiscover_tasks()
