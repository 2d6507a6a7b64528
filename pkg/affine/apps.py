from django.apps import AppConfig


class AffineConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'affine'
    verbose_name = 'Affine Weyl groups'
