int ok_null_between() {
    int *p = malloc(4);
    free(p);
    p = 0;
    free(p);
    return 0;
}
