# Generated by Django 4.2.27 on 2026-10-19 09:12

from django.db import migrations, models
import uuid


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="VerificationRun",
            fields=[
                (
                    "uuid",
                    models.UUIDField(
                        default=uuid.uuid4,
                        editable=False,
                        help_text="Unique identifier for this record",
                        primary_key=True,
                        serialize=False,
                        verbose_name="UUID",
                    ),
                ),
                (
                    "command",
                    models.CharField(
                        db_index=True, max_length=50, verbose_name="command"
                    ),
                ),
                (
                    "surface",
                    models.CharField(blank=True, max_length=20, verbose_name="surface"),
                ),
                (
                    "label",
                    models.CharField(
                        blank=True, max_length=255, verbose_name="scene label"
                    ),
                ),
                (
                    "seed",
                    models.BigIntegerField(blank=True, null=True, verbose_name="seed"),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("started", "Started"),
                            ("completed", "Completed"),
                            ("failed", "Failed"),
                        ],
                        default="started",
                        max_length=20,
                        verbose_name="status",
                    ),
                ),
                (
                    "verdict",
                    models.CharField(
                        blank=True,
                        choices=[
                            ("holds", "Holds"),
                            ("violated", "Violated"),
                            ("inconclusive", "Inconclusive"),
                            ("error", "Error"),
                        ],
                        max_length=20,
                        verbose_name="verdict",
                    ),
                ),
                ("report", models.JSONField(blank=True, default=dict)),
                (
                    "started_at",
                    models.DateTimeField(auto_now_add=True, verbose_name="started at"),
                ),
                (
                    "completed_at",
                    models.DateTimeField(
                        blank=True, null=True, verbose_name="completed at"
                    ),
                ),
                ("celery_task_id", models.CharField(blank=True, max_length=255)),
            ],
            options={
                "verbose_name": "verification run",
                "verbose_name_plural": "verification runs",
                "ordering": ["-started_at"],
            },
        ),
    ]
