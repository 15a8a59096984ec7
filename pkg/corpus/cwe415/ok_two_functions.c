int ok_two_functions_a() {
    int *p = malloc(4);
    free(p);
    return 0;
}
int ok_two_functions_b() {
    int *q = malloc(4);
    free(q);
    return 0;
}
