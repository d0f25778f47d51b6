from django.contrib import admin

from .models import VerificationRun


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    list_display = [
        "started_at",
        "command",
        "surface",
        "label",
        "verdict",
        "status",
        "completed_at",
    ]
    list_filter = ["command", "surface", "verdict", "status"]
    search_fields = ["label", "celery_task_id"]
    readonly_fields = [
        "uuid",
        "started_at",
        "completed_at",
        "celery_task_id",
        "seed",
        "report",
    ]
    ordering = ["-started_at"]
