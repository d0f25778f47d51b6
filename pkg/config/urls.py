"""
URL configuration for the KP Verify project.

The project is driven from management commands; the only web surface is the
Django admin, where recorded verification runs can be browsed.
"""

import os

from django.contrib import admin
from django.urls import path

ADMIN_URL = os.getenv("ADMIN_URL", "admin/")

urlpatterns = [
    path(ADMIN_URL, admin.site.urls),
]
