"""Persistent record of verification runs."""

from django.conf import settings
from django.db import models
from django.utils import timezone
from django.utils.translation import gettext_lazy as _

from apps.core.models import UUIDModel


class VerificationRun(UUIDModel):
    """Tracks each verification command or sweep execution."""

    STATUS_CHOICES = [
        ("started", "Started"),
        ("completed", "Completed"),
        ("failed", "Failed"),
    ]
    VERDICT_CHOICES = [
        ("holds", "Holds"),
        ("violated", "Violated"),
        ("inconclusive", "Inconclusive"),
        ("error", "Error"),
    ]

    command = models.CharField(_("command"), max_length=50, db_index=True)
    surface = models.CharField(_("surface"), max_length=20, blank=True)
    label = models.CharField(_("scene label"), max_length=255, blank=True)
    seed = models.BigIntegerField(_("seed"), null=True, blank=True)
    status = models.CharField(
        _("status"),
        max_length=20,
        choices=STATUS_CHOICES,
        default="started",
    )
    verdict = models.CharField(
        _("verdict"),
        max_length=20,
        choices=VERDICT_CHOICES,
        blank=True,
    )
    report = models.JSONField(default=dict, blank=True)
    started_at = models.DateTimeField(_("started at"), auto_now_add=True)
    completed_at = models.DateTimeField(_("completed at"), null=True, blank=True)

    # Celery task ID for correlation (kp_sweep --use-celery)
    celery_task_id = models.CharField(max_length=255, blank=True)

    class Meta:
        verbose_name = _("verification run")
        verbose_name_plural = _("verification runs")
        ordering = ["-started_at"]

    def __str__(self):
        return f"{self.command} {self.started_at:%Y-%m-%d %H:%M} - {self.verdict or self.status}"

    @classmethod
    def start(cls, command, surface="", label="", seed=None, celery_task_id=""):
        """Create a run, or return None when KP_RECORD_RUNS is off."""
        if not getattr(settings, "KP_RECORD_RUNS", True):
            return None
        return cls.objects.create(
            command=command,
            surface=surface,
            label=label,
            seed=seed,
            celery_task_id=celery_task_id or "",
        )

    def finish(self, verdict="", report=None, failed=False):
        self.status = "failed" if failed else "completed"
        self.verdict = verdict
        self.report = report or {}
        self.completed_at = timezone.now()
        self.save(update_fields=["status", "verdict", "report", "completed_at"])
