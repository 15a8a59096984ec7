int ok_free_plain() {
    int *p = malloc(4);
    free(p);
    return 0;
}
