from django.apps import AppConfig


class WeylConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'weyl'
    verbose_name = 'Weyl groups'
