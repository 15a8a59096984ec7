int df_plain() {
    int *p = malloc(4);
    free(p);
    free(p);
    return 0;
}
