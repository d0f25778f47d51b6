"""
Base models for the KP Verify project.

UUID primary keys let run identifiers be quoted in reports and logs.
"""

import uuid

from django.db import models
from django.utils.translation import gettext_lazy as _


class UUIDModel(models.Model):
    """Abstract base class with a UUID primary key."""

    uuid = models.UUIDField(
        _("UUID"),
        primary_key=True,
        default=uuid.uuid4,
        editable=False,
        help_text=_("Unique identifier for this record"),
    )

    class Meta:
        abstract = True
